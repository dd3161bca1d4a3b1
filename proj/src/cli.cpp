#include "frechet/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "frechet/coupling.hpp"
#include "frechet/json_io.hpp"
#include "frechet/orders.hpp"
#include "frechet/risk_measures.hpp"
#include "frechet/verify.hpp"

namespace frechet::cli {

namespace {

// Inline JSON, "-" for stdin, or a --file fallback.
std::string resolve_payload(const std::string& inline_value, const std::string& file_value,
                            std::istream& in, const char* what) {
    if (inline_value == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    if (!inline_value.empty()) return inline_value;
    if (!file_value.empty()) {
        std::ifstream f(file_value);
        if (!f) throw std::invalid_argument(std::string("cannot read file: ") + file_value);
        std::ostringstream buf;
        buf << f.rdbuf();
        return buf.str();
    }
    throw std::invalid_argument(std::string("missing input: ") + what);
}

Side parse_side(const std::string& side) {
    if (side == "below") return Side::below;
    if (side == "above") return Side::above;
    throw std::invalid_argument("side must be \"below\" or \"above\"");
}

std::string witness_json(const OrderWitness& w) {
    const char* kind = w.kind == OrderWitness::Kind::retention ? "retention"
                       : w.kind == OrderWitness::Kind::level   ? "level"
                                                               : "mean";
    std::string out = "{\"kind\":\"";
    out += kind;
    out += "\",\"value\":" + format_number(w.value);
    out += ",\"lhs\":" + format_number(w.lhs);
    out += ",\"rhs\":" + format_number(w.rhs) + "}";
    return out;
}

std::uint64_t parse_seed_text(const std::string& text) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("seed must be a nonnegative integer");
    }
    if (pos != text.size()) throw std::invalid_argument("seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(value);
}

struct CommandState {
    std::string dist_json, joint_json, class_json, g_json, x_json, y_json, file;
    std::string kind, side = "below", format = "csv", suite;
    double p = 0.0, tol = kMergeTol;
    std::string seed_text = "1";
    int trials = 500;
    bool serial = false;
};

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"sharp convex-order bounds on sums with fixed marginals"};
    app.require_subcommand(1);
    CommandState st;

    auto* quantile = app.add_subcommand("quantile", "generalized inverse of a distribution CDF");
    quantile->add_option("--dist", st.dist_json, "distribution JSON, or - for stdin");
    quantile->add_option("--file", st.file, "read the distribution from a file");
    quantile->add_option("--p", st.p, "level in (0,1]")->required();

    auto* riskmeasure =
        app.add_subcommand("riskmeasure", "distortion risk measure of a distribution");
    riskmeasure->add_option("--g", st.g_json, "distortion JSON")->required();
    riskmeasure->add_option("--dist", st.dist_json, "distribution JSON, or - for stdin");
    riskmeasure->add_option("--file", st.file, "read the distribution from a file");

    auto* build = app.add_subcommand("coupling-build", "construct an extremal coupling");
    build->add_option("--kind", st.kind, "comonotonic|countermonotonic|mutually-exclusive")
        ->required();
    build->add_option("--side", st.side, "below|above (mutually-exclusive only)");
    build->add_option("--class", st.class_json, "Frechet class JSON, or - for stdin");
    build->add_option("--file", st.file, "read the class from a file");

    auto* check = app.add_subcommand("coupling-check", "test a dependence property of a coupling");
    check->add_option("--kind", st.kind, "comonotonic|countermonotonic|mutually-exclusive|member")
        ->required();
    check->add_option("--side", st.side, "below|above (mutually-exclusive only)");
    check->add_option("--joint", st.joint_json, "coupling JSON, or - for stdin");
    check->add_option("--class", st.class_json, "class JSON (member check only)");
    check->add_option("--file", st.file, "read the coupling from a file");
    check->add_option("--tol", st.tol, "comparison tolerance");

    auto* sum = app.add_subcommand("sum", "law of the coordinate sum of a coupling");
    sum->add_option("--joint", st.joint_json, "coupling JSON, or - for stdin");
    sum->add_option("--file", st.file, "read the coupling from a file");

    auto* order = app.add_subcommand("order-check", "decide stop-loss or convex order");
    order->add_option("--kind", st.kind, "sl|cx|sl-tvar")->required();
    order->add_option("--x", st.x_json, "left distribution JSON")->required();
    order->add_option("--y", st.y_json, "right distribution JSON")->required();

    auto* curve = app.add_subcommand("curve", "export a stop-loss or TVaR curve");
    curve->add_option("--kind", st.kind, "stoploss|tvar")->required();
    curve->add_option("--dist", st.dist_json, "distribution JSON, or - for stdin");
    curve->add_option("--file", st.file, "read the distribution from a file");
    curve->add_option("--out", st.format, "csv|json (default csv)");

    auto* verify = app.add_subcommand("verify", "run a seeded verification suite");
    verify->add_option("--suite", st.suite,
                       "thm11-forward|thm11-converse|thm12-forward|thm12-converse|"
                       "lemma22|lemma32|countermonotonic")
        ->required();
    verify->add_option("--seed", st.seed_text, "master seed (default 1)");
    verify->add_option("--trials", st.trials, "trial count (default 500)");
    verify->add_flag("--serial", st.serial, "run trials on the serial reference path");

    std::vector<const char*> argv;
    argv.push_back("frechet-bounds");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    std::string output; // buffered so error paths leave stdout empty

    try {
        if (quantile->parsed()) {
            const auto d =
                parse_distribution(resolve_payload(st.dist_json, st.file, in, "--dist"));
            if (!(st.p > 0.0) || st.p > 1.0) {
                throw std::invalid_argument("--p must lie in (0, 1]");
            }
            output = "{\"quantile\":" + format_number(d.quantile(st.p)) + "}\n";
        } else if (riskmeasure->parsed()) {
            const auto g = parse_distortion(st.g_json == "-" ? resolve_payload("-", "", in, "--g")
                                                             : st.g_json);
            const auto d =
                parse_distribution(resolve_payload(st.dist_json, st.file, in, "--dist"));
            output = "{\"rho\":" + format_number(rho(g, d)) + "}\n";
        } else if (build->parsed()) {
            const auto cls = parse_class(resolve_payload(st.class_json, st.file, in, "--class"));
            JointDistribution j = [&] {
                if (st.kind == "comonotonic") return comonotonic(cls);
                if (st.kind == "countermonotonic") {
                    if (cls.dim() != 2) {
                        throw std::domain_error(
                            "countermonotonic coupling requires exactly two marginals");
                    }
                    return countermonotonic(cls.marginal(0), cls.marginal(1));
                }
                if (st.kind == "mutually-exclusive") {
                    return mutually_exclusive(cls, parse_side(st.side));
                }
                throw std::invalid_argument("unknown coupling kind \"" + st.kind + "\"");
            }();
            output = to_json(j) + "\n";
        } else if (check->parsed()) {
            const auto j = parse_joint(resolve_payload(st.joint_json, st.file, in, "--joint"));
            bool satisfied = false;
            if (st.kind == "comonotonic") {
                satisfied = is_comonotonic(j, st.tol);
            } else if (st.kind == "countermonotonic") {
                if (j.dim() != 2) {
                    throw std::domain_error("countermonotonic check requires a bivariate coupling");
                }
                satisfied = is_countermonotonic(j, st.tol);
            } else if (st.kind == "mutually-exclusive") {
                satisfied = is_mutually_exclusive(j, parse_side(st.side), st.tol);
            } else if (st.kind == "member") {
                if (st.class_json.empty()) {
                    throw std::invalid_argument("member check requires --class");
                }
                satisfied = is_member(j, parse_class(st.class_json), st.tol);
            } else {
                throw std::invalid_argument("unknown check kind \"" + st.kind + "\"");
            }
            output = "{\"kind\":\"" + st.kind +
                     "\",\"satisfied\":" + (satisfied ? "true" : "false") + "}\n";
        } else if (sum->parsed()) {
            const auto j = parse_joint(resolve_payload(st.joint_json, st.file, in, "--joint"));
            output = to_json(sum_distribution(j)) + "\n";
        } else if (order->parsed()) {
            const auto x = parse_distribution(st.x_json);
            const auto y = parse_distribution(st.y_json);
            OrderVerdict v;
            if (st.kind == "sl") {
                v = sl_order(x, y);
            } else if (st.kind == "cx") {
                v = cx_order(x, y);
            } else if (st.kind == "sl-tvar") {
                v = sl_order_via_tvar(x, y);
            } else {
                throw std::invalid_argument("unknown order kind \"" + st.kind + "\"");
            }
            output = std::string("{\"holds\":") + (v.holds ? "true" : "false") + ",\"witness\":" +
                     (v.witness ? witness_json(*v.witness) : std::string("null")) + "}\n";
        } else if (curve->parsed()) {
            const auto d =
                parse_distribution(resolve_payload(st.dist_json, st.file, in, "--dist"));
            std::vector<std::pair<double, double>> pts;
            if (st.kind == "stoploss") {
                pts = stop_loss_curve(d);
            } else if (st.kind == "tvar") {
                pts = tvar_curve(d);
            } else {
                throw std::invalid_argument("unknown curve kind \"" + st.kind + "\"");
            }
            if (st.format == "csv") {
                output = "x,value\n";
                for (const auto& [x, v] : pts) {
                    output += format_number(x) + "," + format_number(v) + "\n";
                }
            } else if (st.format == "json") {
                output = "{\"points\":[";
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    if (k) output += ',';
                    output += "[" + format_number(pts[k].first) + "," +
                              format_number(pts[k].second) + "]";
                }
                output += "]}\n";
            } else {
                throw std::invalid_argument("unknown output format \"" + st.format + "\"");
            }
        } else if (verify->parsed()) {
            std::uint64_t seed = parse_seed_text(st.seed_text);
            if (const char* env = std::getenv("FRECHET_BOUNDS_SEED")) {
                seed = parse_seed_text(env);
            }
            if (st.trials < 0) throw std::invalid_argument("--trials must be nonnegative");
            const VerificationReport report = run_named_suite(
                st.suite, seed, st.trials, st.serial ? RunMode::serial : RunMode::parallel);
            if (!report.all_passed()) {
                err << report.to_json() << "\n";
                return 1;
            }
            output = report.to_json() + "\n";
        }
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    out << output;
    return 0;
}

} // namespace frechet::cli
