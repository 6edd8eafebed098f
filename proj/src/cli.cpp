#include "ivlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ivlab/bounds.hpp"
#include "ivlab/corpus.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/maxent.hpp"
#include "ivlab/montecarlo.hpp"
#include "ivlab/parse.hpp"
#include "ivlab/stats.hpp"

namespace ivlab {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Check& c) { return Json{{"id", c.id}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}}; }

Json to_json(const MCEstimate& e) {
    return Json{{"id", e.estimator_id}, {"value", e.value}, {"se", e.std_error}, {"samples", e.samples},
                {"seed", e.seed}};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// The fields every report carries.
Json base_report(const std::string& command, const Body& body) {
    const auto seq = sequence_of(body);
    const auto dist = normalize(seq);
    Json j;
    j["command"] = command;
    j["body"] = format_body(body);
    j["ambient_dim"] = ambient_dim(body);
    j["intrinsic_dim"] = intrinsic_dim(body);
    j["sequence"] = std::vector<double>(seq.values().begin(), seq.values().end());
    j["wills"] = wills(seq);
    j["delta"] = dist.mean;
    j["variance"] = dist.variance;
    j["entropy"] = dist.entropy;
    j["estimates"] = Json::array();
    j["checks"] = Json::array();
    return j;
}

void add_checks(Json& j, const std::vector<Check>& checks) {
    for (const auto& c : checks) j["checks"].push_back(to_json(c));
}

bool report_passes(const Json& j) {
    for (const auto& c : j["checks"])
        if (!c["pass"].get<bool>()) return false;
    return true;
}

std::string fmt_number(const Json& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    if (v.is_null()) return "n/a";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void render_human(const Json& j, std::ostream& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (is_scalar(v)) {
            out << pad << it.key() << ": " << fmt_number(v) << '\n';
        } else if (v.is_array()) {
            const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
            if (flat) {
                out << pad << it.key() << ": [";
                for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << fmt_number(v[i]);
                out << "]\n";
            } else {
                out << pad << it.key() << ":\n";
                for (const auto& item : v) {
                    out << pad << "  -";
                    for (auto f = item.begin(); f != item.end(); ++f) {
                        if (is_scalar(f.value()))
                            out << ' ' << f.key() << '=' << fmt_number(f.value());
                        else
                            out << ' ' << f.key() << '=' << f.value().dump();
                    }
                    out << '\n';
                }
            }
        } else {
            out << pad << it.key() << ":\n";
            render_human(v, out, indent + 2);
        }
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            g.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("bad grid value '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return g;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::optional<double>>>& rows) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    char buf[64];
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) f << ',';
            if (r[i]) {
                std::snprintf(buf, sizeof buf, "%.17g", *r[i]);
                f << buf;
            }
        }
        f << '\n';
    }
}

struct Settings {
    std::string body_text;
    bool json = false;
    std::string csv;
    std::string grid;
    std::string theta_grid;
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    std::int64_t chunk = 8192;
    std::optional<int> threads;
    std::optional<double> sigma;
    double max_se = 4.0;
    double lambda = 1.0;
    int j = -1;
    std::int64_t corpus_samples = 20000;
};

McOptions mc_options(const Settings& s) {
    McOptions o;
    o.samples = s.samples;
    o.seed = s.seed;
    o.chunk_size = s.chunk;
    o.proposal_sigma = s.sigma;
    if (s.threads) {
        o.threads = *s.threads;
    } else if (const char* env = std::getenv("IV_LAB_THREADS")) {
        try {
            o.threads = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw InputError("IV_LAB_THREADS must be an integer");
        }
    }
    return o;
}

void add_estimate(Json& j, const MCEstimate& e, double exact, double max_se) {
    Json row = to_json(e);
    row["exact"] = exact;
    row["se_distance"] = e.se_distance(exact);
    j["estimates"].push_back(row);
    j["checks"].push_back(to_json(Check{e.estimator_id + ".within_" + fmt_number(Json(max_se)) + "_se",
                                        e.within(exact, max_se), std::abs(e.value - exact),
                                        max_se * e.std_error}));
}

Json cmd_exact(const Settings& s) { return base_report("exact", parse_body(s.body_text)); }

Json cmd_stats(const Settings& s) {
    const Body body = parse_body(s.body_text);
    Json j = base_report("stats", body);
    const auto seq = sequence_of(body);
    j["probs"] = normalize(seq).probs;
    j["quermassintegrals"] = quermassintegrals(seq);
    add_checks(j, ulc_check(seq));
    add_checks(j, chevet_mcmullen_check(seq));
    add_checks(j, quermass_log_concavity_check(seq));
    return j;
}

Json cmd_bounds(const Settings& s) {
    const Body body = parse_body(s.body_text);
    Json j = base_report("bounds", body);
    const auto seq = sequence_of(body);
    const auto st = h_moments_from_sequence(seq);
    const auto vb = variance_bound(st);
    j["eh"] = st.eh;
    j["eh2"] = st.eh2;
    j["var_h"] = st.var_h();
    j["variance_bound_2n_plus"] = vb.two_n_plus;
    j["variance_bound_4n"] = vb.four_n;
    j["variance_bound_sharp"] = variance_bound_sharp(st);
    j["variance_ratio"] = st.var_z > 0.0 ? Json(vb.two_n_plus / st.var_z) : Json(nullptr);
    const auto grid = s.theta_grid.empty() ? default_theta_grid() : parse_grid(s.theta_grid);
    j["mgf"] = Json::array();
    std::vector<std::vector<std::optional<double>>> rows;
    for (double theta : grid) {
        const double lhs = log_mgf_lhs(seq, theta);
        const double rhs = log_mgf_bound(st.n, st.ez, theta);
        j["mgf"].push_back(Json{{"theta", theta}, {"log_mgf", lhs}, {"log_bound", rhs}});
        rows.push_back({theta, lhs, rhs, std::exp(lhs), std::exp(rhs)});
    }
    add_checks(j, concentration_checks(seq, grid));
    if (!s.csv.empty()) write_csv(s.csv, {"theta", "log_mgf", "log_bound", "mgf", "bound"}, rows);
    return j;
}

Json cmd_tails(const Settings& s) {
    const Body body = parse_body(s.body_text);
    Json j = base_report("tails", body);
    const auto seq = sequence_of(body);
    const auto grid = s.grid.empty() ? default_tail_grid(seq.dim()) : parse_grid(s.grid);
    const auto rep = tail_report(seq, grid);
    j["tails"] = Json::array();
    std::vector<std::vector<std::optional<double>>> rows;
    for (const auto& r : rep.rows) {
        j["tails"].push_back(Json{{"t", r.t},
                                  {"upper_mass", r.upper_mass},
                                  {"lower_mass", r.lower_mass},
                                  {"two_sided_mass", r.two_sided_mass},
                                  {"bennett_upper", r.bennett_upper},
                                  {"bennett_lower", optional_number(r.bennett_lower)},
                                  {"bernstein_upper", r.bernstein_upper},
                                  {"bernstein_lower", optional_number(r.bernstein_lower)},
                                  {"bernstein_two_sided", r.bernstein_two_sided},
                                  {"headline", optional_number(r.headline)}});
        rows.push_back({r.t, r.upper_mass, r.lower_mass, r.two_sided_mass, r.bennett_upper, r.bennett_lower,
                        r.bernstein_upper, r.bernstein_lower, r.bernstein_two_sided, r.headline});
    }
    add_checks(j, rep.checks);
    if (!s.csv.empty())
        write_csv(s.csv,
                  {"t", "upper_mass", "lower_mass", "two_sided_mass", "bennett_upper", "bennett_lower",
                   "bernstein_upper", "bernstein_lower", "bernstein_two_sided", "headline"},
                  rows);
    return j;
}

Json cmd_maxent(const Settings& s) {
    const Body body = parse_body(s.body_text);
    Json j = base_report("maxent", body);
    const auto rep = maxent_check(sequence_of(body));
    j["maxent"] = Json{{"p", rep.p},
                       {"matched_cube_side", rep.p < 1.0 ? Json(s_for_target(rep.delta, rep.n)) : Json(nullptr)},
                       {"matched_cube_entropy", rep.matched_cube_entropy},
                       {"unit_cube_entropy", rep.unit_cube_entropy},
                       {"gap_to_matched", rep.gap_to_matched},
                       {"gap_to_unit", rep.gap_to_unit},
                       {"ulc_order_n", rep.ulc_order_n}};
    add_checks(j, rep.checks);
    return j;
}

Json cmd_mc(const std::string& which, const Settings& s) {
    const Body body = parse_body(s.body_text);
    Json j = base_report(which, body);
    const auto opts = mc_options(s);
    const auto seq = sequence_of(body);
    if (which == "mc-wills") {
        add_estimate(j, wills_estimate(body, opts), wills(seq), s.max_se);
    } else if (which == "mc-kubota") {
        if (s.j < 0) throw InputError("mc-kubota needs --j");
        if (s.j > seq.dim()) throw InputError("index j must lie in [0, n]");
        add_estimate(j, kubota_estimate(body, s.j, opts), seq[s.j], s.max_se);
    } else if (which == "mc-gf") {
        const double exact = std::pow(s.lambda, -seq.dim()) * gf_eval(seq, s.lambda);
        add_estimate(j, gf_estimate(body, s.lambda, opts), exact, s.max_se);
    } else if (which == "mc-steiner") {
        const auto res = steiner_check(body, s.lambda, opts);
        add_estimate(j, res.mc_volume, res.polynomial_value, s.max_se);
    } else if (which == "mc-beta") {
        const auto res = beta_integral_check(body, s.lambda, opts);
        add_estimate(j, res.mc, res.exact, s.max_se);
    } else if (which == "mc-hmoments") {
        const auto st = h_moments_from_sequence(seq);
        const auto [eh, eh2] = h_moment_estimates(body, opts);
        add_estimate(j, eh, st.eh, s.max_se);
        add_estimate(j, eh2, st.eh2, s.max_se);
    }
    return j;
}

Json cmd_corpus_verify(const Settings& s) {
    Settings mc = s;
    mc.samples = s.corpus_samples;
    const auto opts = mc_options(mc);
    Json j;
    j["command"] = "corpus-verify";
    j["seed"] = s.seed;
    j["samples"] = opts.samples;
    j["bodies"] = Json::array();
    j["estimates"] = Json::array();
    j["checks"] = Json::array();
    std::size_t total = 0;
    std::size_t failed = 0;
    for (const auto& entry : builtin_corpus()) {
        const auto seq = sequence_of(entry.body);
        auto checks = exact_checks(seq);
        const auto est = wills_estimate(entry.body, opts);
        checks.push_back(Check{"wills_mc_within_" + fmt_number(Json(s.max_se)) + "_se",
                               est.within(wills(seq), s.max_se), std::abs(est.value - wills(seq)),
                               s.max_se * est.std_error});
        Json e = to_json(est);
        e["body"] = entry.text;
        e["exact"] = wills(seq);
        j["estimates"].push_back(e);
        std::size_t body_failed = 0;
        for (auto& c : checks) {
            c.id = entry.text + ": " + c.id;
            if (!c.pass) ++body_failed;
            j["checks"].push_back(to_json(c));
        }
        total += checks.size();
        failed += body_failed;
        j["bodies"].push_back(Json{{"body", entry.text},
                                   {"checks", checks.size()},
                                   {"failures", body_failed}});
    }
    j["checks_total"] = total;
    j["failures_total"] = failed;
    return j;
}

void render_corpus_human(const Json& j, std::ostream& out) {
    out << "corpus-verify seed=" << j["seed"].get<std::uint64_t>() << " samples=" << j["samples"].get<std::int64_t>()
        << '\n';
    for (const auto& b : j["bodies"])
        out << (b["failures"].get<std::size_t>() == 0 ? "  ok    " : "  FAIL  ") << b["body"].get<std::string>()
            << "  (" << b["checks"].get<std::size_t>() << " checks, " << b["failures"].get<std::size_t>()
            << " failed)\n";
    for (const auto& c : j["checks"])
        if (!c["pass"].get<bool>())
            out << "  violated: " << c["id"].get<std::string>() << " lhs=" << fmt_number(c["lhs"])
                << " rhs=" << fmt_number(c["rhs"]) << '\n';
    out << "total: " << j["checks_total"].get<std::size_t>() << " checks, " << j["failures_total"].get<std::size_t>()
        << " failed\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact intrinsic volumes, concentration bounds and Monte Carlo cross-checks"};
    app.require_subcommand(1);
    Settings s;

    auto add_body = [&](CLI::App* sub) {
        sub->add_option("body", s.body_text, "body expression, e.g. box:1,2,3 or product(cube:2;ball:3,1)")
            ->required();
        sub->add_flag("--json", s.json, "emit JSON instead of text");
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--samples", s.samples, "number of samples")->check(CLI::PositiveNumber);
        sub->add_option("--seed", s.seed, "random seed");
        sub->add_option("--chunk", s.chunk, "samples per deterministic substream")->check(CLI::PositiveNumber);
        sub->add_option("--threads", s.threads, "worker threads (output does not depend on it)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--sigma", s.sigma, "proposal scale override")->check(CLI::PositiveNumber);
        sub->add_option("--max-se", s.max_se, "allowed distance from the exact value in standard errors");
    };

    std::vector<std::pair<std::string, CLI::App*>> subs;
    auto sub = [&](const std::string& name, const std::string& help) {
        CLI::App* c = app.add_subcommand(name, help);
        subs.emplace_back(name, c);
        return c;
    };

    add_body(sub("exact", "print the intrinsic-volume sequence"));
    add_body(sub("stats", "Wills functional, central intrinsic volume, variance, entropy, ULC, quermassintegrals"));
    {
        auto* c = sub("bounds", "variance bounds and moment generating function checks");
        add_body(c);
        c->add_option("--theta-grid", s.theta_grid, "comma-separated theta values");
        c->add_option("--csv", s.csv, "write the theta grid as CSV");
    }
    {
        auto* c = sub("tails", "exact tail masses against the tail bounds");
        add_body(c);
        c->add_option("--grid", s.grid, "comma-separated t values (index units)");
        c->add_option("--csv", s.csv, "write the tail report as CSV");
    }
    add_body(sub("maxent", "compare the intrinsic entropy with scaled cubes"));
    const std::pair<const char*, const char*> mc_commands[] = {
        {"mc-wills", "importance-sampled integral of exp(-pi dist^2) against the Wills functional"},
        {"mc-kubota", "Haar-averaged projection volumes against V_j"},
        {"mc-steiner", "hit-or-miss parallel-body volume against the Steiner polynomial"},
        {"mc-beta", "integral of (1 + lambda dist)^-(n+1) against its intrinsic-volume expansion"},
        {"mc-gf", "integral of exp(-lambda^2 pi dist^2) against the generating function"},
        {"mc-hmoments", "self-normalized E H and E H^2 against the exact moments"},
    };
    for (const auto& [name, help] : mc_commands) {
        auto* c = sub(name, help);
        add_body(c);
        add_mc(c);
        const std::string n = name;
        if (n == "mc-kubota") c->add_option("--j", s.j, "intrinsic volume index")->required();
        if (n == "mc-steiner" || n == "mc-beta" || n == "mc-gf")
            c->add_option("--lambda", s.lambda, "positive parameter")->check(CLI::PositiveNumber);
    }
    {
        auto* c = sub("corpus-verify", "run every invariant over the built-in corpus");
        c->add_flag("--json", s.json, "emit JSON instead of text");
        c->add_option("--seed", s.seed, "random seed");
        c->add_option("--samples", s.corpus_samples, "Monte Carlo samples per body")->check(CLI::PositiveNumber);
        c->add_option("--chunk", s.chunk, "samples per deterministic substream")->check(CLI::PositiveNumber);
        c->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);
        c->add_option("--max-se", s.max_se, "allowed distance in standard errors");
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    std::string command;
    for (const auto& [name, c] : subs)
        if (c->parsed()) command = name;

    try {
        Json report;
        if (command == "exact") report = cmd_exact(s);
        else if (command == "stats") report = cmd_stats(s);
        else if (command == "bounds") report = cmd_bounds(s);
        else if (command == "tails") report = cmd_tails(s);
        else if (command == "maxent") report = cmd_maxent(s);
        else if (command == "corpus-verify") report = cmd_corpus_verify(s);
        else report = cmd_mc(command, s);

        if (s.json)
            out << report.dump(2) << '\n';
        else if (command == "corpus-verify")
            render_corpus_human(report, out);
        else
            render_human(report, out);
        return report_passes(report) ? kExitOk : kExitCheckFailed;
    } catch (const CapabilityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCapability;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace ivlab
