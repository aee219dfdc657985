#include "opo/sweep_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace opo {

namespace {

constexpr const char* kConfigPrefix = "# config: ";
constexpr int kDigits = 12;

std::string k_token(const KFactorResult& k) {
    return k.K ? format_number(*k.K) : std::string("inf");
}

struct RowFields {
    std::string n_a, n_b, total;
};

RowFields photon_fields(const SweepRecord& rec) {
    if (!rec.photons) return {"inf", "inf", "inf"};
    return {format_number(rec.photons->n_a), format_number(rec.photons->n_b), format_number(rec.photons->total)};
}

// JSON numbers go through the same 12-digit rounding as CSV.
nlohmann::ordered_json json_number(const std::string& token) {
    if (token == "inf" || token == "-inf" || token == "nan") return token;
    return std::stod(token);
}

}  // namespace

std::string_view to_string(OutputFormat f) noexcept {
    return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidParameter("output format must be csv or json, got '" + std::string(name) + "'");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const double ax = std::abs(x);
    if (ax < 1e-3 || ax >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.*e", kDigits - 1, x);
        return buf;
    }
    const int int_digits = static_cast<int>(std::floor(std::log10(ax))) + 1;
    std::snprintf(buf, sizeof buf, "%.*f", std::max(0, kDigits - int_digits), x);
    // Rounding may carry into a new leading digit (999.99... -> 1000.0...).
    const double rounded = std::abs(std::strtod(buf, nullptr));
    if (rounded >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.*e", kDigits - 1, x);
    } else if (rounded >= std::pow(10.0, int_digits)) {
        std::snprintf(buf, sizeof buf, "%.*f", std::max(0, kDigits - int_digits - 1), x);
    }
    return buf;
}

nlohmann::json to_json(const CavityParams& p) {
    return {{"G", p.G}, {"R", p.R}, {"t", p.t}, {"phi", p.phi}, {"theta", p.theta}};
}

CavityParams params_from_json(const nlohmann::json& j) {
    CavityParams p;
    p.G = j.at("G").get<double>();
    p.R = j.at("R").get<double>();
    p.t = j.at("t").get<double>();
    p.phi = j.at("phi").get<double>();
    p.theta = j.at("theta").get<double>();
    return p;
}

nlohmann::json sweep_config(const SweepPlan& plan, OutputFormat format) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : plan.axes) {
        axes.push_back({{"name", std::string(to_string(a.name))}, {"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
    }
    return {{"version", kVersion},
            {"command", "sweep"},
            {"params", to_json(plan.fixed)},
            {"axes", axes},
            {"format", std::string(to_string(format))}};
}

SweepPlan plan_from_config(const nlohmann::json& config) {
    SweepPlan plan;
    plan.fixed = params_from_json(config.at("params"));
    for (const auto& a : config.at("axes")) {
        plan.axes.push_back(AxisSpec{param_from_string(a.at("name").get<std::string>()), a.at("lo").get<double>(),
                                     a.at("hi").get<double>(), a.at("count").get<std::size_t>()});
    }
    return plan;
}

OutputFormat format_from_config(const nlohmann::json& config) {
    return format_from_string(config.value("format", std::string("csv")));
}

void write_csv(std::ostream& os, const SweepResult& result, const nlohmann::json& config) {
    os << kConfigPrefix << config.dump() << '\n';
    os << "t,phi,theta,G,R,n_a,n_b,N_total,K,regime\n";
    for (const auto& rec : result.records) {
        const auto& p = rec.params;
        const auto n = photon_fields(rec);
        os << format_number(p.t) << ',' << format_number(p.phi) << ',' << format_number(p.theta) << ','
           << format_number(p.G) << ',' << format_number(p.R) << ',' << n.n_a << ',' << n.n_b << ',' << n.total << ','
           << k_token(rec.k) << ',' << to_string(rec.k.regime) << '\n';
    }
}

void write_json(std::ostream& os, const SweepResult& result, const nlohmann::json& config) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& rec : result.records) {
        const auto& p = rec.params;
        const auto n = photon_fields(rec);
        records.push_back(nlohmann::ordered_json{{"t", json_number(format_number(p.t))},
                           {"phi", json_number(format_number(p.phi))},
                           {"theta", json_number(format_number(p.theta))},
                           {"G", json_number(format_number(p.G))},
                           {"R", json_number(format_number(p.R))},
                           {"n_a", json_number(n.n_a)},
                           {"n_b", json_number(n.n_b)},
                           {"N_total", json_number(n.total)},
                           {"K", json_number(k_token(rec.k))},
                           {"regime", std::string(to_string(rec.k.regime))}});
    }
    nlohmann::ordered_json doc;
    doc["config"] = nlohmann::ordered_json::parse(config.dump());
    doc["records"] = std::move(records);
    os << doc.dump(1) << '\n';
}

void write_sweep(std::ostream& os, const SweepResult& result, const nlohmann::json& config, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_csv(os, result, config);
    } else {
        write_json(os, result, config);
    }
}

nlohmann::json read_config(std::istream& is) {
    std::string first;
    std::getline(is, first);
    if (first.rfind(kConfigPrefix, 0) == 0) return nlohmann::json::parse(first.substr(std::string(kConfigPrefix).size()));
    std::stringstream rest;
    rest << first << '\n' << is.rdbuf();
    auto doc = nlohmann::json::parse(rest.str());
    return doc.at("config");
}

}  // namespace opo
