#include "frechet/json_io.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace frechet {

namespace {

nlohmann::json must_parse(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("malformed JSON");
    return j;
}

std::vector<double> number_array(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw std::invalid_argument(std::string("missing array field \"") + field + "\"");
    }
    std::vector<double> out;
    out.reserve(j[field].size());
    for (const auto& v : j[field]) {
        if (!v.is_number()) throw std::invalid_argument("non-numeric array entry");
        out.push_back(v.get<double>());
    }
    return out;
}

DiscreteDistribution distribution_from(const nlohmann::json& j) {
    return DiscreteDistribution::make(number_array(j, "support"), number_array(j, "probs"));
}

double number_field(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number()) {
        throw std::invalid_argument(std::string("missing numeric field \"") + field + "\"");
    }
    return j[field].get<double>();
}

} // namespace

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

DiscreteDistribution parse_distribution(const std::string& json) {
    return distribution_from(must_parse(json));
}

JointDistribution parse_joint(const std::string& json) {
    const nlohmann::json j = must_parse(json);
    if (!j.contains("dim") || !j["dim"].is_number_integer()) {
        throw std::invalid_argument("joint: missing integer field \"dim\"");
    }
    const auto dim = j["dim"].get<long>();
    if (dim < 2) throw std::invalid_argument("joint: dim must be >= 2");
    if (!j.contains("atoms") || !j["atoms"].is_array()) {
        throw std::invalid_argument("joint: missing array field \"atoms\"");
    }
    std::vector<JointAtom> atoms;
    atoms.reserve(j["atoms"].size());
    for (const auto& a : j["atoms"]) {
        JointAtom atom;
        atom.point = number_array(a, "x");
        atom.prob = number_field(a, "p");
        atoms.push_back(std::move(atom));
    }
    return JointDistribution::make(static_cast<std::size_t>(dim), std::move(atoms));
}

FrechetClass parse_class(const std::string& json) {
    const nlohmann::json j = must_parse(json);
    if (!j.contains("marginals") || !j["marginals"].is_array()) {
        throw std::invalid_argument("class: missing array field \"marginals\"");
    }
    std::vector<DiscreteDistribution> ms;
    ms.reserve(j["marginals"].size());
    for (const auto& m : j["marginals"]) ms.push_back(distribution_from(m));
    return FrechetClass(std::move(ms));
}

DistortionFunction parse_distortion(const std::string& json) {
    const nlohmann::json j = must_parse(json);
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw std::invalid_argument("distortion: missing string field \"kind\"");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "identity") return DistortionFunction::identity();
    if (kind == "var") return DistortionFunction::var_level(number_field(j, "p"));
    if (kind == "tvar") return DistortionFunction::tvar_level(number_field(j, "p"));
    if (kind == "ph") return DistortionFunction::proportional_hazard(number_field(j, "r"));
    if (kind == "dual_power") return DistortionFunction::dual_power(number_field(j, "s"));
    if (kind == "piecewise_linear") {
        if (!j.contains("points") || !j["points"].is_array()) {
            throw std::invalid_argument("distortion: missing array field \"points\"");
        }
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : j["points"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                throw std::invalid_argument("distortion: points must be [u, g(u)] pairs");
            }
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return DistortionFunction::piecewise_linear(std::move(pts));
    }
    throw std::invalid_argument("distortion: unknown kind \"" + kind + "\"");
}

namespace {

void append_array(std::string& out, const std::vector<double>& xs) {
    out += '[';
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ',';
        out += format_number(xs[k]);
    }
    out += ']';
}

} // namespace

std::string to_json(const DiscreteDistribution& d) {
    std::string out = "{\"support\":";
    append_array(out, d.support());
    out += ",\"probs\":";
    append_array(out, d.probs());
    out += '}';
    return out;
}

std::string to_json(const JointDistribution& j) {
    std::string out = "{\"dim\":" + std::to_string(j.dim()) + ",\"atoms\":[";
    for (std::size_t k = 0; k < j.atoms().size(); ++k) {
        if (k) out += ',';
        out += "{\"x\":";
        append_array(out, j.atoms()[k].point);
        out += ",\"p\":" + format_number(j.atoms()[k].prob) + '}';
    }
    out += "]}";
    return out;
}

std::string to_json(const FrechetClass& c) {
    std::string out = "{\"marginals\":[";
    for (std::size_t i = 0; i < c.dim(); ++i) {
        if (i) out += ',';
        out += to_json(c.marginal(i));
    }
    out += "]}";
    return out;
}

} // namespace frechet
