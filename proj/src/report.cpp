#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "error.hpp"
#include "svg.hpp"

namespace idprof::report {

using nlohmann::json;

namespace {

constexpr const char* kAggregationNote =
    "std is the population standard deviation; natural-image datasets average runs within each "
    "architecture before averaging across architectures; domain rows are mean and std of the "
    "per-dataset means";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json fit_json(const analysis::LinearFit& fit) { return {{"slope", fit.slope}, {"intercept", fit.intercept}}; }

json mean_std_json(const analysis::MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

std::uint64_t get_u64(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned()) {
        throw Error(ErrorCode::Schema, std::string("expected non-negative integer '") + key + "'");
    }
    return it->get<std::uint64_t>();
}

}  // namespace

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json config_to_json(const idcore::EstimatorConfig& c) {
    json j = {{"k", c.k}, {"aggregation", std::string(idcore::aggregation_name(c.aggregation))}};
    j["subsample"] = c.subsample ? json{{"m", c.subsample->m}, {"seed", c.subsample->seed}} : json(nullptr);
    j["bootstrap"] = c.bootstrap ? json{{"rounds", c.bootstrap->rounds}, {"seed", c.bootstrap->seed}} : json(nullptr);
    j["jitter"] = c.jitter ? json{{"epsilon", c.jitter->epsilon}, {"seed", c.jitter->seed}} : json(nullptr);
    return j;
}

idcore::EstimatorConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Schema, "estimator config must be an object");
    idcore::EstimatorConfig c;
    c.k = get_u64(j, "k");
    const auto agg = j.find("aggregation");
    if (agg == j.end() || !agg->is_string()) throw Error(ErrorCode::Schema, "estimator config needs 'aggregation'");
    try {
        c.aggregation = idcore::parse_aggregation(agg->get<std::string>());
    } catch (const Error& e) {
        throw Error(ErrorCode::Schema, e.what());
    }
    if (auto it = j.find("subsample"); it != j.end() && !it->is_null()) {
        c.subsample = idcore::Subsample{get_u64(*it, "m"), get_u64(*it, "seed")};
    }
    if (auto it = j.find("bootstrap"); it != j.end() && !it->is_null()) {
        c.bootstrap = idcore::Bootstrap{get_u64(*it, "rounds"), get_u64(*it, "seed")};
    }
    if (auto it = j.find("jitter"); it != j.end() && !it->is_null()) {
        const auto eps = it->find("epsilon");
        if (eps == it->end() || !eps->is_number()) throw Error(ErrorCode::Schema, "jitter needs numeric 'epsilon'");
        c.jitter = idcore::Jitter{eps->get<double>(), get_u64(*it, "seed")};
    }
    return c;
}

json estimate_to_json(const idcore::IDEstimate& est, const std::string& source, const std::string& dataset_id,
                      const std::string& domain) {
    json j = {{"kind", "idprof.estimate"}, {"source", source}};
    if (!dataset_id.empty()) j["dataset_id"] = dataset_id;
    if (!domain.empty()) j["domain"] = domain;
    j["value"] = est.value;
    j["n_used"] = est.n_used;
    j["spread"] = est.spread ? json(*est.spread) : json(nullptr);
    j["estimator"] = config_to_json(est.config);
    return j;
}

idcore::IDEstimate estimate_from_json(const json& j) {
    idcore::IDEstimate est;
    const auto value = j.find("value");
    if (value == j.end() || !value->is_number()) throw Error(ErrorCode::Schema, "estimate needs numeric 'value'");
    est.value = value->get<double>();
    if (!(est.value > 0.0) || !std::isfinite(est.value)) {
        throw Error(ErrorCode::Schema, "estimate value must be positive and finite");
    }
    est.n_used = get_u64(j, "n_used");
    if (auto it = j.find("spread"); it != j.end() && !it->is_null()) {
        if (!it->is_number() || it->get<double>() < 0.0) throw Error(ErrorCode::Schema, "spread must be >= 0");
        est.spread = it->get<double>();
    }
    if (auto it = j.find("estimator"); it != j.end()) est.config = config_from_json(*it);
    return est;
}

json profile_to_json(const profile::IDCurve& curve, const profile::PeakSummary& peak) {
    const auto& m = curve.manifest;
    json meta = {{"train_size", m.metadata.train_size},
                 {"task", m.metadata.task},
                 {"input_dims", m.metadata.input_dims},
                 {"class_count", m.metadata.class_count}};
    if (!m.metadata.architecture.empty()) meta["architecture"] = m.metadata.architecture;
    if (!m.metadata.domain.empty()) meta["domain"] = m.metadata.domain;
    if (!m.metadata.run.empty()) meta["run"] = m.metadata.run;

    json points = json::array();
    json missing = json::array();
    for (const auto& p : curve.points) {
        json e = {{"index", p.index}, {"name", p.name}, {"relative_depth", p.relative_depth}};
        if (p.estimate) {
            e["value"] = p.estimate->value;
            e["n_used"] = p.estimate->n_used;
            e["spread"] = p.estimate->spread ? json(*p.estimate->spread) : json(nullptr);
        } else {
            e["value"] = nullptr;
            e["error"] = p.error;
            missing.push_back(p.index);
        }
        points.push_back(std::move(e));
    }
    return json{{"kind", "idprof.profile"},
                {"model_id", m.model_id},
                {"dataset_id", m.dataset_id},
                {"L", m.layer_count},
                {"metadata", std::move(meta)},
                {"estimator", config_to_json(curve.config)},
                {"curve", std::move(points)},
                {"missing_layers", std::move(missing)},
                {"peak", {{"i_star", peak.i_star}, {"d_max", peak.d_max}, {"rel_depth", peak.rel_depth}}}};
}

std::string curve_to_csv(const profile::IDCurve& curve) {
    std::string s = "index,name,relative_depth,id,n_used,spread,error\n";
    for (const auto& p : curve.points) {
        s += std::to_string(p.index) + "," + csv_field(p.name) + "," + number(p.relative_depth) + ",";
        if (p.estimate) {
            s += number(p.estimate->value) + "," + std::to_string(p.estimate->n_used) + ",";
            if (p.estimate->spread) s += number(*p.estimate->spread);
            s += ",\n";
        } else {
            s += ",,," + csv_field(p.error) + "\n";
        }
    }
    return s;
}

std::string curve_to_svg(const profile::IDCurve& curve, const profile::PeakSummary& peak) {
    svg::Plot plot("ID by relative depth: " + curve.manifest.model_id + " / " + curve.manifest.dataset_id,
                   "relative depth i/L", "intrinsic dimension");
    std::vector<std::pair<double, double>> pts;
    double y_max = 0.0;
    for (const auto& p : curve.points) {
        if (!p.estimate) continue;
        pts.emplace_back(p.relative_depth, p.estimate->value);
        y_max = std::max(y_max, p.estimate->value + p.estimate->spread.value_or(0.0));
    }
    plot.set_x_range(0.0, 1.0);
    const svg::Ticks yt = svg::nice_ticks(0.0, y_max * 1.1);
    plot.set_y_range(0.0, yt.hi);
    plot.polyline(pts, "#1f77b4");
    for (const auto& p : curve.points) {
        if (!p.estimate) continue;
        if (p.estimate->spread) plot.error_bar(p.relative_depth, p.estimate->value, 0.0, *p.estimate->spread, "#1f77b4");
        plot.marker(p.relative_depth, p.estimate->value, "#1f77b4");
    }
    plot.marker(peak.rel_depth, peak.d_max, "#d62728", 5.0);
    plot.note("peak: i*=" + std::to_string(peak.i_star) + ", d_max=" + number(std::round(peak.d_max * 100) / 100) +
              ", i*/L=" + number(std::round(peak.rel_depth * 1000) / 1000));
    return plot.render();
}

std::string peak_table_to_csv(const analysis::PeakTable& table) {
    std::string s = std::string("# ") + kAggregationNote + "\n";
    s += "domain,dataset_id,n,d_max_mean,d_max_std,rel_depth_mean,rel_depth_std\n";
    for (const auto& row : table.datasets) {
        s += std::string(analysis::domain_name(row.domain)) + "," + csv_field(row.dataset_id) + "," +
             std::to_string(row.n_models) + "," + number(row.d_max.mean) + "," + number(row.d_max.std) + "," +
             number(row.rel_depth.mean) + "," + number(row.rel_depth.std) + "\n";
    }
    for (const auto& d : table.domains) {
        s += std::string(analysis::domain_name(d.domain)) + ",AVERAGE," + std::to_string(d.n_datasets) + "," +
             number(d.d_max.mean) + "," + number(d.d_max.std) + "," + number(d.rel_depth.mean) + "," +
             number(d.rel_depth.std) + "\n";
    }
    return s;
}

json peak_table_to_json(const analysis::PeakTable& table) {
    json datasets = json::array();
    for (const auto& row : table.datasets) {
        datasets.push_back({{"dataset_id", row.dataset_id},
                            {"domain", analysis::domain_name(row.domain)},
                            {"n_models", row.n_models},
                            {"d_max", mean_std_json(row.d_max)},
                            {"rel_depth", mean_std_json(row.rel_depth)}});
    }
    json domains = json::array();
    for (const auto& d : table.domains) {
        domains.push_back({{"domain", analysis::domain_name(d.domain)},
                           {"n_datasets", d.n_datasets},
                           {"d_max", mean_std_json(d.d_max)},
                           {"rel_depth", mean_std_json(d.rel_depth)}});
    }
    return json{{"kind", "idprof.peaks"}, {"note", kAggregationNote}, {"datasets", datasets}, {"domains", domains}};
}

json correlation_to_json(const analysis::CorrelationReport& report) {
    json points = json::array();
    for (const auto& p : report.points) {
        points.push_back({{"dataset_id", p.dataset_id},
                          {"domain", analysis::domain_name(p.domain)},
                          {"d_data", p.d_data},
                          {"d_data_spread", p.d_data_spread},
                          {"d_max", mean_std_json(p.d_max)}});
    }
    json j = {{"kind", "idprof.correlation"},
              {"note", "points are per-dataset means over models; fit is ordinary least squares d_max = slope * d_data + intercept"},
              {"points", std::move(points)},
              {"r", report.r},
              {"fit", fit_json(report.fit)}};
    j["pooled"] = report.pooled ? json{{"n_points", report.pooled->n_points},
                                       {"r", report.pooled->r},
                                       {"fit", fit_json(report.pooled->fit)}}
                                : json(nullptr);
    return j;
}

std::string correlation_to_csv(const analysis::CorrelationReport& report) {
    std::string s = "dataset_id,domain,d_data,d_data_spread,d_max_mean,d_max_std\n";
    for (const auto& p : report.points) {
        s += csv_field(p.dataset_id) + "," + std::string(analysis::domain_name(p.domain)) + "," + number(p.d_data) +
             "," + number(p.d_data_spread) + "," + number(p.d_max.mean) + "," + number(p.d_max.std) + "\n";
    }
    return s;
}

std::string correlation_to_svg(const analysis::CorrelationReport& report) {
    svg::Plot plot("Peak representation ID vs dataset ID", "d_data", "d_max (mean over models)");
    double x_max = 0.0, y_max = 0.0;
    for (const auto& p : report.points) {
        x_max = std::max(x_max, p.d_data + p.d_data_spread);
        y_max = std::max(y_max, p.d_max.mean + p.d_max.std);
    }
    const svg::Ticks xt = svg::nice_ticks(0.0, x_max * 1.1);
    const svg::Ticks yt = svg::nice_ticks(0.0, y_max * 1.1);
    plot.set_x_range(0.0, xt.hi);
    plot.set_y_range(0.0, yt.hi);

    // Clip the fit line to the visible box.
    double fx0 = 0.0, fx1 = xt.hi;
    auto fy = [&](double x) { return report.fit.slope * x + report.fit.intercept; };
    if (report.fit.slope != 0.0) {
        const double at_zero = -report.fit.intercept / report.fit.slope;
        const double at_top = (yt.hi - report.fit.intercept) / report.fit.slope;
        fx0 = std::clamp(std::min(at_zero, at_top), 0.0, xt.hi);
        fx1 = std::clamp(std::max(at_zero, at_top), 0.0, xt.hi);
    }
    plot.line(fx0, fy(fx0), fx1, fy(fx1), "#7f7f7f", true);

    for (const auto& p : report.points) {
        const std::string colour = p.domain == analysis::Domain::Natural ? "#1f77b4" : "#d62728";
        plot.error_bar(p.d_data, p.d_max.mean, p.d_data_spread, p.d_max.std, colour);
        plot.marker(p.d_data, p.d_max.mean, colour);
        plot.label(p.d_data, p.d_max.mean, p.dataset_id);
    }
    plot.note("r = " + number(std::round(report.r * 1000) / 1000));
    plot.note("fit: d_max = " + number(std::round(report.fit.slope * 1000) / 1000) + " d_data + " +
              number(std::round(report.fit.intercept * 1000) / 1000));
    plot.note("blue: natural, red: medical");
    return plot.render();
}

std::string sweep_to_csv(const std::vector<analysis::SweepRow>& rows) {
    std::string s = std::string("# ") + kAggregationNote + "\n";
    s += "domain,train_size,n_datasets,d_max_mean,d_max_std,rel_depth_mean,rel_depth_std\n";
    for (const auto& row : rows) {
        const auto& a = row.aggregate;
        s += std::string(analysis::domain_name(a.domain)) + "," + std::to_string(row.train_size) + "," +
             std::to_string(a.n_datasets) + "," + number(a.d_max.mean) + "," + number(a.d_max.std) + "," +
             number(a.rel_depth.mean) + "," + number(a.rel_depth.std) + "\n";
    }
    return s;
}

json sweep_to_json(const std::vector<analysis::SweepRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"train_size", row.train_size},
                       {"domain", analysis::domain_name(row.aggregate.domain)},
                       {"n_datasets", row.aggregate.n_datasets},
                       {"d_max", mean_std_json(row.aggregate.d_max)},
                       {"rel_depth", mean_std_json(row.aggregate.rel_depth)}});
    }
    return json{{"kind", "idprof.sweep"}, {"note", kAggregationNote}, {"rows", out}};
}

}  // namespace idprof::report
