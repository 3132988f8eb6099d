#include "maxgraph/serialize.hpp"

namespace maxgraph::serialize {

namespace {

Json point(const Point& p) { return Json::array({p.x(), p.y()}); }

Json matrix(const Mat2& m) {
    return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

std::string metric_spec(const graph::ConformalMetric& m) { return m.name(); }

}  // namespace

Json to_json(const graph::PointReport& r) {
    Json j;
    j["point"] = point(r.point);
    j["theta"] = r.theta;
    j["H"] = r.mean_curvature;
    j["K_gauss"] = r.K_gauss_eq;
    j["K_numeric"] = r.K_numeric;
    j["normA2"] = r.norm_A_sq;
    j["detA"] = r.det_A;
    j["kappaM"] = r.kappa_M;
    j["grad_h_norm2"] = r.grad_h_norm_sq;
    j["grad_h"] = point(r.grad_h);
    j["shape_operator"] = matrix(r.shape_op);
    j["maximal"] = r.maximal;
    j["laplace_inv_theta"] = r.laplace_inv_theta;
    j["khat_scaled"] = r.khat_scaled;
    j["khat_scaled_nonnegative"] = r.khat_scaled >= 0.0;
    j["inv_theta_subharmonic"] = r.inv_theta_subharmonic ? Json(*r.inv_theta_subharmonic) : Json(nullptr);
    Json res = Json::object();
    for (const auto& [name, v] : r.residuals) res[name] = v;
    j["residuals"] = res;
    return j;
}

Json to_json(const solver::SolveReport& r) {
    Json j;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["residual_sup"] = r.residual_sup;
    j["initial_residual_sup"] = r.initial_residual_sup;
    j["min_margin"] = r.min_margin;
    j["residual_history"] = r.residual_history;
    j["margin_history"] = r.margin_history;
    j["step_lengths"] = r.step_lengths;
    return j;
}

Json to_json(const solver::RefinementStudy& s) {
    Json levels = Json::array();
    for (const auto& l : s.levels) {
        levels.push_back({{"n", l.n},
                          {"h", l.h},
                          {"sup_error", l.sup_error},
                          {"iterations", l.iterations},
                          {"min_margin", l.min_margin},
                          {"min_iterate_margin", l.min_iterate_margin}});
    }
    return {{"levels", levels}, {"orders", s.orders}, {"observed_order", s.observed_order}};
}

Json to_json(const completeness::LengthResult& r) {
    return {{"length", r.length},
            {"error_estimate", r.error_estimate},
            {"converged", r.converged},
            {"lower_bound", !r.converged},
            {"extrapolated", r.extrapolated},
            {"tails", r.tails}};
}

Json to_json(const completeness::ScanResult& r) {
    return {{"infimum", r.infimum}, {"argmin", point(r.argmin)}};
}

Json to_json(const duality::DualityResult& r) {
    return {{"basepoint", point(r.basepoint)},
            {"direction", r.direction == duality::Direction::MinimalToMaximal ? "min-to-max" : "max-to-min"},
            {"closedness_sup", r.closedness_sup},
            {"path_independence_err", r.path_independence_err},
            {"min_margin", r.min_margin},
            {"certified", r.certified}};
}

Json grid_to_json(const Grid2D& g) {
    const GridSpec& s = g.spec();
    Json j;
    j["schema"] = kGridSchema;
    j["bounds"] = {{"x1", {s.x1_min, s.x1_max}}, {"x2", {s.x2_min, s.x2_max}}};
    j["resolution"] = {s.nx, s.ny};
    j["order"] = "row-major: index j*nx + i";
    j["values"] = g.values();
    return j;
}

Grid2D grid_from_json(const Json& j) {
    if (j.value("schema", "") != kGridSchema) throw ValidationError("not a maxgraph-grid/1 document");
    GridSpec s;
    try {
        s.x1_min = j.at("bounds").at("x1").at(0);
        s.x1_max = j.at("bounds").at("x1").at(1);
        s.x2_min = j.at("bounds").at("x2").at(0);
        s.x2_max = j.at("bounds").at("x2").at(1);
        s.nx = j.at("resolution").at(0);
        s.ny = j.at("resolution").at(1);
        return Grid2D(s, j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed grid document: ") + e.what());
    }
}

Json catalog_snippet(const catalog::CatalogEntry& e) {
    Json props = Json::array();
    for (auto p : e.properties) props.push_back(catalog::property_name(p));
    Json j;
    j["metric"] = metric_spec(e.metric);
    j["signature"] = e.signature == graph::Signature::Lorentzian ? "lorentzian" : "riemannian";
    j["fields"] = {{e.name, {{"catalog", e.name}}}};
    j["description"] = e.description;
    j["properties"] = props;
    if (e.expression) j["expression"] = *e.expression;
    return j;
}

}  // namespace maxgraph::serialize
