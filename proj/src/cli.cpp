#include "bclab/cli.hpp"

#include "bclab/algebraic.hpp"
#include "bclab/level_cache.hpp"
#include "bclab/measure.hpp"
#include "bclab/powersum.hpp"
#include "bclab/spectra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace bclab {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

enum class Format { Json, Csv, Table };

struct RunConfig {
    int precision_bits = 128;
    std::uint64_t budget = std::uint64_t{1} << 26;
    std::string cache_dir;
    std::uint64_t seed = 0;
    Format format = Format::Json;
    int threads = 1;
    bool timing = false;
    std::string summary_path;
};

// Raised for reducible input so the factor reaches the report.
class ReducibleInput : public Error {
public:
    explicit ReducibleInput(IntPolynomial factor)
        : Error(ErrorCode::Reducible, "input is reducible, factor " + factor.to_string()), factor_(std::move(factor)) {}
    const IntPolynomial& factor() const { return factor_; }

private:
    IntPolynomial factor_;
};

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json bounded(const BoundedReal& b) { return json{{"value", b.value}, {"error", b.error}}; }

// A double derived from exact data by a few correctly rounded operations.
json derived(double v) { return json{{"value", v}, {"error", std::fabs(v) * 1e-12}}; }

json exact_real(double v) { return json{{"value", v}, {"error", 0.0}}; }

json big(const mpz_class& v) { return v.get_str(); }

json coefficients(const IntPolynomial& p) {
    json out = json::array();
    for (const auto& c : p.descending()) out.push_back(big(c));
    return out;
}

json digits_json(const std::vector<int>& d) {
    json out = json::array();
    for (int x : d) out.push_back(x);
    return out;
}

bool is_bounded(const json& v) { return v.is_object() && v.contains("value") && v.contains("error"); }

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt_double(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += " ";
            out += cell(v[i]);
        }
        return out;
    }
    return v.dump();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Streams rows as they complete, then the envelope.
class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string command, std::ostream& out, std::ostream& err)
        : cfg_(cfg), command_(std::move(command)), out_(out), err_(err) {}

    void row(const json& r) {
        rows_.push_back(r);
        if (cfg_.format == Format::Json) {
            json line{{"type", "row"}, {"command", command_}, {"row", r}};
            out_ << line.dump() << "\n";
            out_.flush();
            return;
        }
        std::vector<std::string> names, cells;
        for (auto it = r.begin(); it != r.end(); ++it) {
            if (is_bounded(it.value())) {
                names.push_back(it.key());
                names.push_back(it.key() + "_err");
                cells.push_back(cell(it.value()["value"]));
                cells.push_back(cell(it.value()["error"]));
            } else {
                names.push_back(it.key());
                cells.push_back(cell(it.value()));
            }
        }
        if (!header_done_) {
            header_done_ = true;
            widths_.clear();
            for (const auto& n : names) widths_.push_back(std::max<std::size_t>(n.size(), 14));
            write_line(names);
        }
        write_line(cells);
        out_.flush();
    }

    const json& rows() const { return rows_; }

    void finish(const json& envelope) {
        const std::string text = envelope.dump();
        if (!cfg_.summary_path.empty()) {
            std::ofstream f(cfg_.summary_path);
            f << text << "\n";
            if (!f) fail(ErrorCode::InvalidArgument, "cannot write summary file " + cfg_.summary_path);
        }
        if (cfg_.format == Format::Json) {
            out_ << text << "\n";
        } else if (cfg_.format == Format::Table) {
            out_ << "\n";
            print_summary(envelope["payload"]["summary"], "");
        } else if (cfg_.summary_path.empty()) {
            err_ << text << "\n";
        }
        out_.flush();
    }

private:
    void write_line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cfg_.format == Format::Csv) {
                if (i) out_ << ",";
                out_ << csv_escape(cells[i]);
            } else {
                if (i) out_ << " ";
                const std::size_t w = i < widths_.size() ? widths_[i] : 14;
                out_ << std::string(cells[i].size() < w ? w - cells[i].size() : 0, ' ') << cells[i];
            }
        }
        out_ << "\n";
    }

    void print_summary(const json& s, const std::string& prefix) {
        if (!s.is_object()) return;
        for (auto it = s.begin(); it != s.end(); ++it) {
            const std::string key = prefix + it.key();
            if (is_bounded(it.value())) {
                out_ << key << ": " << cell(it.value()["value"]) << " +- " << cell(it.value()["error"]) << "\n";
            } else if (it.value().is_object()) {
                print_summary(it.value(), key + ".");
            } else {
                out_ << key << ": " << (it.value().is_array() ? it.value().dump() : cell(it.value())) << "\n";
            }
        }
    }

    const RunConfig& cfg_;
    std::string command_;
    std::ostream& out_;
    std::ostream& err_;
    json rows_ = json::array();
    bool header_done_ = false;
    std::vector<std::size_t> widths_;
};

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::InvalidArgument, path + ":" + std::to_string(number) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        for (char& c : key)
            if (c == '-') c = '_';
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "table") return Format::Table;
    fail(ErrorCode::InvalidArgument, "unknown output format '" + s + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        fail(ErrorCode::InvalidArgument, "config value for " + key + " is not an integer: " + v);
    return out;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "precision_bits") {
            cfg.precision_bits = static_cast<int>(parse_u64(k, v));
        } else if (k == "budget") {
            cfg.budget = parse_u64(k, v);
        } else if (k == "cache_dir") {
            cfg.cache_dir = v;
        } else if (k == "seed") {
            cfg.seed = parse_u64(k, v);
        } else if (k == "output_format") {
            cfg.format = parse_format(v);
        } else if (k == "threads") {
            cfg.threads = static_cast<int>(parse_u64(k, v));
        } else {
            fail(ErrorCode::InvalidArgument, "unknown config key '" + k + "'");
        }
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.precision_bits < 64) fail(ErrorCode::InvalidArgument, "precision_bits must be at least 64");
    if (cfg.budget < 1024) fail(ErrorCode::InvalidArgument, "budget must be at least 2^10");
    if (cfg.threads < 1 || cfg.threads > 256) fail(ErrorCode::InvalidArgument, "threads must be in [1, 256]");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

// Shared state for one subcommand run.
struct Context {
    RunConfig cfg;
    std::string command;
    std::string poly_text;
    json parameters = json::object();
    std::unique_ptr<LevelCache> cache;
    std::optional<IntPolynomial> poly;
    std::optional<AlgebraicNumber> number;
    json warnings = json::array();

    EnumerationOptions enumeration() const {
        EnumerationOptions o;
        o.budget = cfg.budget;
        o.threads = cfg.threads;
        o.cache = cache.get();
        return o;
    }

    AlgebraicOptions algebraic() const {
        AlgebraicOptions o;
        o.bits = cfg.precision_bits;
        o.max_bits = std::max(2048, 16 * cfg.precision_bits);
        return o;
    }

    const AlgebraicNumber& load() {
        poly = parse_polynomial(poly_text);
        const auto verdict = irreducibility_check(*poly);
        if (verdict.kind == IrreducibilityVerdict::Kind::Reducible) throw ReducibleInput(*verdict.factor);
        if (verdict.kind == IrreducibilityVerdict::Kind::Inconclusive)
            fail(ErrorCode::DegreeCapExceeded, "degree " + std::to_string(poly->degree()) + " is above the cap");
        number = make_algebraic(*poly, algebraic());
        if (number->outside_unit_interval()) warnings.push_back("theta lies outside (1, 2)");
        return *number;
    }
};

json classification_json(const ClassificationReport& c) {
    return json{{"algebraic_integer", c.is_algebraic_integer},
                {"unit", c.is_unit},
                {"height", big(c.height)},
                {"pisot", c.is_pisot},
                {"salem", c.is_salem},
                {"perron", c.is_perron},
                {"garsia", c.is_garsia},
                {"has_minus_theta_conjugate", c.has_minus_theta_conjugate},
                {"in_range_1_2", c.in_range_1_2},
                {"mahler", bounded(c.mahler)}};
}

const char* modulus_name(ModulusClass m) {
    switch (m) {
    case ModulusClass::Inside: return "inside";
    case ModulusClass::OnCircle: return "on_circle";
    case ModulusClass::Outside: return "outside";
    }
    return "unknown";
}

json envelope(Context& ctx, json payload, double seconds) {
    json env;
    env["type"] = "envelope";
    env["tool"] = "bclab";
    env["version"] = kVersion;
    env["command"] = ctx.command;
    if (ctx.poly) {
        env["minpoly"] = json{{"text", ctx.poly->to_string()}, {"coefficients", coefficients(*ctx.poly)}};
    } else {
        env["minpoly"] = nullptr;
    }
    if (ctx.number) {
        const auto& t = ctx.number->theta();
        env["theta"] = json{{"value", t.center().real()}, {"error", t.radius_upper() + std::fabs(t.center().real()) * 1e-16}};
        try {
            env["classification"] = classification_json(classify(*ctx.number));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionExhausted) throw;
            env["classification"] = nullptr;
            ctx.warnings.push_back(std::string("classification undecided: ") + e.what());
        }
    } else {
        env["theta"] = nullptr;
        env["classification"] = nullptr;
    }
    json params = ctx.parameters;
    params["precision_bits"] = ctx.cfg.precision_bits;
    params["budget"] = ctx.cfg.budget;
    params["seed"] = ctx.cfg.seed;
    env["parameters"] = params;
    env["warnings"] = ctx.warnings;
    env["payload"] = std::move(payload);
    if (ctx.cfg.timing) env["wall_time_s"] = seconds;
    return env;
}

// Endpoint syntax: "0", "T" (right end of the support), "mid" (T/2), or a
// {0,1} digit string a_1 a_2 ... meaning sum a_k theta^-k.
ThetaField::Element parse_point(const ThetaField& field, const std::string& text) {
    if (text == "T" || text == "end") return field.support_end();
    if (text == "mid") return field.scale(field.support_end(), mpq_class(1, 2));
    std::vector<int> digits;
    for (char c : text) {
        if (c != '0' && c != '1') fail(ErrorCode::InvalidArgument, "bad point '" + text + "'");
        digits.push_back(c - '0');
    }
    if (digits.empty()) fail(ErrorCode::InvalidArgument, "empty point");
    std::vector<int> reversed(digits.rbegin(), digits.rend());
    return field.digits_value(reversed, -static_cast<long>(digits.size()));
}

json measure_json(const MeasureBound& m) {
    return json{{"depth", m.depth},
                {"lower_count", m.lower_count},
                {"upper_count", m.upper_count},
                {"lower", exact_real(m.lower.get_d())},
                {"upper", exact_real(m.upper.get_d())}};
}

json optional_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return derived(*v);
}

// Subcommand implementations; each returns the payload.

json cmd_classify(Context& ctx, Emitter& em) {
    const AlgebraicNumber& a = ctx.load();
    const auto report = classify(a);
    for (std::size_t j = 0; j < a.conjugates().size(); ++j) {
        const auto& c = a.conjugates()[j];
        em.row(json{{"j", j},
                    {"re", json{{"value", c.center().real()}, {"error", c.radius_upper()}}},
                    {"im", json{{"value", c.center().imag()}, {"error", c.radius_upper()}}},
                    {"is_real", c.is_real},
                    {"modulus", modulus_name(a.modulus_classes()[j])},
                    {"is_theta", j == a.theta_index()}});
    }
    json summary = classification_json(report);
    summary["irreducible"] = true;
    summary["degree"] = a.degree();
    summary["s"] = a.s();
    return json{{"summary", summary}, {"conjugates", em.rows()}};
}

json cmd_dn(Context& ctx, Emitter& em, int nmax, double epsilon) {
    ctx.parameters["nmax"] = nmax;
    ctx.parameters["epsilon"] = epsilon;
    const AlgebraicNumber& a = ctx.load();
    const auto rep = growth_report(a, nmax, epsilon, ctx.enumeration(), [&](const GrowthRow& r) {
        em.row(json{{"n", r.n}, {"d_n", r.d_n}, {"root", derived(r.root)}, {"c_n", derived(r.c_n)},
                    {"in_sandwich", r.in_sandwich}});
    });
    json violations = json::array();
    for (const auto& [n, k] : rep.subadditivity_violations) violations.push_back(json::array({n, k}));
    json summary{{"subadditive", rep.subadditive},
                 {"subadditivity_violations", violations},
                 {"nondecreasing", rep.nondecreasing},
                 {"c_nondecreasing", rep.c_nondecreasing},
                 {"all_in_sandwich", std::all_of(rep.rows.begin(), rep.rows.end(), [](const GrowthRow& r) { return r.in_sandwich; })},
                 {"epsilon", exact_real(epsilon)},
                 {"mahler", bounded(rep.mahler)}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json cmd_level(Context& ctx, Emitter& em, int n, const std::string& alphabet_text) {
    const DigitAlphabet alphabet = parse_alphabet(alphabet_text);
    ctx.parameters["n"] = n;
    ctx.parameters["alphabet"] = to_string(alphabet);
    const AlgebraicNumber& a = ctx.load();
    const LevelSet l = enumerate_level(a, n, alphabet, ctx.enumeration());
    for (std::size_t i = 0; i < l.size(); ++i) {
        em.row(json{{"i", i},
                    {"sum", bounded(l.value(i).bounded())},
                    {"multiplicity", l.multiplicity(i)},
                    {"witness", digits_json(l.witness(i))},
                    {"residue", element_to_string(l.residue(i))}});
    }
    json summary{{"n", n},
                 {"alphabet", to_string(alphabet)},
                 {"count", l.size()},
                 {"total_multiplicity", l.total_multiplicity()},
                 {"precision_bits", l.precision_bits()}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json gap_row_json(const GapRow& r) {
    return json{{"n", r.n},
                {"count", r.count},
                {"g_n", bounded(r.min_gap)},
                {"G_n", bounded(r.max_gap)},
                {"g_n_exact", element_to_string(r.min_gap_exact)}};
}

json gap_summary(const GapSeries& s) {
    return json{{"monotone", s.monotone},
                {"strictly_decreasing", s.strictly_decreasing},
                {"constant_tail_start", s.constant_tail_start},
                {"ell_proxy", bounded(s.ell_proxy)},
                {"L_proxy", bounded(s.big_l_proxy)},
                {"note", "level proxies of liminf/limsup, not limits"}};
}

json cmd_gaps(Context& ctx, Emitter& em, int nmax) {
    ctx.parameters["nmax"] = nmax;
    const AlgebraicNumber& a = ctx.load();
    const auto s = gap_series(a, nmax, ctx.enumeration(), [&](const GapRow& r) { em.row(gap_row_json(r)); });
    return json{{"summary", gap_summary(s)}, {"rows", em.rows()}};
}

json cmd_gap_reduction(Context& ctx, Emitter& em, int nmax) {
    ctx.parameters["nmax"] = nmax;
    const AlgebraicNumber& a = ctx.load();
    const auto rep = gap_reduction_check(a, nmax, ctx.enumeration());
    for (const auto* series : {&rep.theta_gaps, &rep.root_gaps}) {
        for (const auto& r : series->rows) {
            json row{{"series", series == &rep.theta_gaps ? "theta" : "sqrt_theta"}};
            row.update(gap_row_json(r));
            em.row(row);
        }
    }
    json summary{{"sqrt_minpoly", rep.root.minpoly().to_string()},
                 {"sqrt_theta", bounded({rep.root.theta_approx(), rep.root.theta().radius_upper() + 1e-16})},
                 {"root_dominates", rep.root_dominates},
                 {"theta_decay", derived(rep.theta_decay)},
                 {"root_decay", derived(rep.root_decay)},
                 {"theta", gap_summary(rep.theta_gaps)},
                 {"sqrt", gap_summary(rep.root_gaps)}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json cmd_entropy(Context& ctx, Emitter& em, int nmax) {
    ctx.parameters["nmax"] = nmax;
    const AlgebraicNumber& a = ctx.load();
    const auto rep = garsia_entropy(a, nmax, ctx.enumeration(), [&](const EntropyRow& r) {
        em.row(json{{"n", r.n}, {"H_n", bounded(r.entropy)}, {"dim_estimate", derived(r.dim_estimate)},
                    {"distinct", r.distinct}});
    });
    json summary = json::object();
    if (!rep.rows.empty()) {
        summary["H_last"] = bounded(rep.rows.back().entropy);
        summary["dim_estimate"] = derived(rep.rows.back().dim_estimate);
    }
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json cmd_measure(Context& ctx, Emitter& em, int n, int depth, int guard) {
    ctx.parameters["n"] = n;
    ctx.parameters["depth"] = depth;
    ctx.parameters["guard"] = guard;
    const AlgebraicNumber& a = ctx.load();
    ThetaField field(a);
    std::size_t j = 0;
    const auto prof = local_dimension_profile(a, n, depth, ctx.enumeration(), guard, [&](const LocalDimSample& s) {
        em.row(json{{"j", j++},
                    {"left", bounded(field.enclose(s.left, 64).bounded())},
                    {"right", bounded(field.enclose(s.right, 64).bounded())},
                    {"length", bounded(s.length)},
                    {"lower", exact_real(s.measure.lower.get_d())},
                    {"upper", exact_real(s.measure.upper.get_d())},
                    {"defined", s.defined},
                    {"ratio_low", s.defined ? derived(s.ratio_low) : json(nullptr)},
                    {"ratio_high", s.defined && std::isfinite(s.ratio_high) ? derived(s.ratio_high) : json(nullptr)}});
    });
    const auto& m = prof.summary;
    json summary{{"d_n", m.d_n},
                 {"min_ratio_low", derived(m.min_ratio_low)},
                 {"median_ratio_low", derived(m.median_ratio_low)},
                 {"median_ratio_high", std::isfinite(m.median_ratio_high) ? derived(m.median_ratio_high) : json(nullptr)},
                 {"sandwich_lower_min", derived(m.sandwich_lower_min)},
                 {"sandwich_upper_max", derived(m.sandwich_upper_max)},
                 {"salem_statistic", optional_json(m.salem_statistic)},
                 {"log_statistic_min", optional_json(m.log_statistic_min)},
                 {"log_statistic_max", optional_json(m.log_statistic_max)},
                 {"log_sign_flag", m.log_sign_flag}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json cmd_interval(Context& ctx, Emitter& em, const std::string& left, const std::string& right, int depth) {
    ctx.parameters["left"] = left;
    ctx.parameters["right"] = right;
    ctx.parameters["depth"] = depth;
    const AlgebraicNumber& a = ctx.load();
    ThetaField field(a);
    const auto l = parse_point(field, left), r = parse_point(field, right);
    const auto bound = measure_bounds(field, l, r, depth, ctx.enumeration());
    em.row(json{{"depth", depth}, {"lower", exact_real(bound.lower.get_d())}, {"upper", exact_real(bound.upper.get_d())}});
    return json{{"summary", measure_json(bound)}, {"rows", em.rows()}};
}

json cmd_branching(Context& ctx, Emitter& em, int samples, int length, int nmax, int guard, const std::string& x) {
    ctx.parameters["samples"] = samples;
    ctx.parameters["N"] = length;
    ctx.parameters["nmax"] = nmax;
    ctx.parameters["guard"] = guard;
    const AlgebraicNumber& a = ctx.load();
    if (!x.empty()) {
        ctx.parameters["x"] = x;
        ThetaField field(a);
        std::vector<int> digits;
        for (char c : x) {
            if (c != '0' && c != '1') fail(ErrorCode::InvalidArgument, "x must be a {0,1} digit string");
            digits.push_back(c - '0');
        }
        const auto r = branching_count(field, digits, nmax, guard, ctx.cfg.budget);
        for (std::size_t i = 0; i < r.beta.size(); ++i)
            em.row(json{{"sample", 0}, {"n", i + 1}, {"beta", r.beta[i]}, {"growth", derived(r.growth[i])}});
        json summary{{"max_states", r.max_states}};
        return json{{"summary", summary}, {"rows", em.rows()}};
    }
    const auto rep = branching_growth(a, samples, length, nmax, ctx.cfg.seed, ctx.enumeration(), guard);
    for (std::size_t s = 0; s < rep.results.size(); ++s) {
        const auto& r = rep.results[s];
        for (std::size_t i = 0; i < r.beta.size(); ++i)
            em.row(json{{"sample", s}, {"n", i + 1}, {"beta", r.beta[i]}, {"growth", derived(r.growth[i])}});
    }
    json means = json::array();
    for (const auto& row : rep.rows)
        means.push_back(json{{"n", row.n},
                             {"mean", derived(row.mean)},
                             {"min", derived(row.min)},
                             {"max", derived(row.max)},
                             {"dim_estimate", optional_json(row.dim_estimate)}});
    json summary{{"mean_at_nmax", derived(rep.rows.back().mean)},
                 {"dim_estimate_at_nmax", optional_json(rep.rows.back().dim_estimate)},
                 {"agreement_gap", optional_json(rep.agreement_gap)}};
    return json{{"summary", summary}, {"means", means}, {"rows", em.rows()}};
}

json cmd_density(Context& ctx, Emitter& em, const std::string& points_text, const std::string& m_text, int guard) {
    ctx.parameters["points"] = points_text;
    ctx.parameters["m"] = m_text;
    ctx.parameters["guard"] = guard;
    const AlgebraicNumber& a = ctx.load();
    ThetaField field(a);
    const auto names = split(points_text, ',');
    std::vector<ThetaField::Element> points;
    for (const auto& p : names) points.push_back(parse_point(field, p));
    std::vector<int> ms;
    for (const auto& m : split(m_text, ',')) ms.push_back(static_cast<int>(parse_u64("m", m)));
    density_profile(a, points, ms, ctx.enumeration(), guard, [&](const DensityRow& r) {
        em.row(json{{"point", names[r.point]},
                    {"m", r.m},
                    {"radius", derived(r.radius)},
                    {"lower", exact_real(r.measure.lower.get_d())},
                    {"upper", exact_real(r.measure.upper.get_d())},
                    {"density_low", derived(r.density_low)},
                    {"density_high", derived(r.density_high)}});
    });
    return json{{"summary", json{{"rows", em.rows().size()}}}, {"rows", em.rows()}};
}

json cmd_traces(Context& ctx, Emitter& em, int N) {
    ctx.parameters["N"] = N;
    const AlgebraicNumber& a = ctx.load();
    const auto rep = trace_residual_report(a, N);
    for (const auto& r : rep.rows) {
        em.row(json{{"n", r.n},
                    {"t_n", big(r.trace)},
                    {"dominant", bounded(r.dominant)},
                    {"r_n", bounded(r.residual)},
                    {"r_n_normalized", r.normalized ? bounded(*r.normalized) : json(nullptr)},
                    {"r_n_real", bounded(r.residual_real)}});
    }
    json summary{{"s", rep.s},
                 {"max_normalized", derived(rep.max_normalized)},
                 {"max_abs_residual", derived(rep.max_abs_residual)},
                 {"max_abs_residual_real", derived(rep.max_abs_residual_real)}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

json cmd_salem_sums(Context& ctx, Emitter& em, int N) {
    ctx.parameters["N"] = N;
    const AlgebraicNumber& a = ctx.load();
    const auto all = unit_circle_partial_sums(a, N);
    json per = json::array();
    for (const auto& s : all) {
        for (std::size_t i = 0; i < s.sums.size(); ++i)
            em.row(json{{"j", s.conjugate}, {"n", i + 1}, {"P", bounded(s.sums[i])}});
        per.push_back(json{{"j", s.conjugate},
                           {"argument", derived(s.argument)},
                           {"exponent", derived(s.exponent)},
                           {"sup", derived(s.sup)},
                           {"closed_form_bound", derived(1.0 / std::fabs(std::sin(s.argument / 2)))}});
    }
    return json{{"summary", json{{"conjugates", per}}}, {"rows", em.rows()}};
}

json cmd_reduce(Context& ctx, Emitter& em, int max_steps) {
    ctx.parameters["max_steps"] = max_steps;
    const AlgebraicNumber& a = ctx.load();
    const auto tower = sqrt_tower_reduce(a, max_steps);
    em.row(json{{"steps", tower.steps},
                {"minpoly", tower.alpha.minpoly().to_string()},
                {"alpha", bounded({tower.alpha.theta_approx(), tower.alpha.theta().radius_upper() + 1e-16})}});
    json summary{{"steps", tower.steps},
                 {"alpha_minpoly", tower.alpha.minpoly().to_string()},
                 {"alpha_coefficients", coefficients(tower.alpha.minpoly())}};
    return json{{"summary", summary}, {"rows", em.rows()}};
}

}  // namespace

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Syntax:
    case ErrorCode::ZeroPolynomial:
    case ErrorCode::DegreeZero:
    case ErrorCode::InvalidArgument: return 2;
    case ErrorCode::Reducible: return 3;
    case ErrorCode::PrecisionExhausted: return 4;
    case ErrorCode::BudgetExceeded: return 5;
    case ErrorCode::NotMonic:
    case ErrorCode::NotSalem: return 6;
    case ErrorCode::ReductionDidNotTerminate: return 7;
    case ErrorCode::NoRealRootAboveOne: return 8;
    case ErrorCode::DegreeCapExceeded: return 9;
    case ErrorCode::CacheIO: return 10;
    }
    return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact-arithmetic laboratory for Bernoulli convolutions and power sums of algebraic numbers", "bclab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<int> precision_bits;
    std::optional<std::uint64_t> budget, seed;
    std::optional<int> threads;
    std::string cache_dir, config_path, format_text;
    bool json_flag = false, csv_flag = false, table_flag = false, timing = false;
    std::string summary_path;
    app.add_option("--precision-bits", precision_bits, "Working precision in bits (>= 64)");
    app.add_option("--budget", budget, "Maximum number of digit strings per enumeration");
    app.add_option("--threads", threads, "Worker threads");
    app.add_option("--cache-dir", cache_dir, "Level cache directory (env BCLAB_CACHE_DIR)");
    app.add_option("--seed", seed, "Seed for sampled digit strings");
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--format", format_text, "json, csv or table");
    app.add_flag("--json", json_flag, "JSON lines output (default)");
    app.add_flag("--csv", csv_flag, "CSV rows; envelope to --summary or stderr");
    app.add_flag("--table", table_flag, "Aligned text rows and summary");
    app.add_flag("--timing", timing, "Include wall time in the envelope");
    app.add_option("--summary", summary_path, "Also write the envelope to this file");

    std::string poly;
    int nmax = 0, n = 0, depth = 0, guard = 8, N = 0, samples = 20, max_steps = 6;
    double epsilon = 0.02;
    std::string alphabet = "01", left, right, x, points, m_list;

    auto add_poly = [&](CLI::App* sub) { sub->add_option("poly", poly, "Polynomial: \"x^2-x-1\" or \"1,-1,-1\"")->required(); };

    auto* classify_cmd = app.add_subcommand("classify", "Classify theta (Pisot, Salem, Perron, Garsia, ...)");
    add_poly(classify_cmd);

    auto* dn_cmd = app.add_subcommand("dn", "d_n growth report over {0,1} power sums");
    add_poly(dn_cmd);
    dn_cmd->add_option("--nmax", nmax, "Largest level")->default_val(12);
    dn_cmd->add_option("--epsilon", epsilon, "Sandwich slack")->default_val(0.02);

    auto* level_cmd = app.add_subcommand("level", "List one deduplicated, sorted level set");
    add_poly(level_cmd);
    level_cmd->add_option("--n", n, "Level")->default_val(4);
    level_cmd->add_option("--alphabet", alphabet, "01 or -101")->default_val("01");

    auto* gaps_cmd = app.add_subcommand("gaps", "Min/max adjacent gaps of {-1,0,1} power sums");
    add_poly(gaps_cmd);
    gaps_cmd->add_option("--nmax", nmax, "Largest level")->default_val(10);

    auto* reduction_cmd = app.add_subcommand("gap-reduction", "Gap series of theta and sqrt(theta)");
    add_poly(reduction_cmd);
    reduction_cmd->add_option("--nmax", nmax, "Largest level")->default_val(8);

    auto* entropy_cmd = app.add_subcommand("entropy", "Garsia entropy H_n and dimension estimate");
    add_poly(entropy_cmd);
    entropy_cmd->add_option("--nmax", nmax, "Largest level")->default_val(12);

    auto* measure_cmd = app.add_subcommand("measure", "Measure bounds and local dimension over level-n gaps");
    add_poly(measure_cmd);
    measure_cmd->add_option("--n", n, "Net level")->default_val(8);
    measure_cmd->add_option("--depth", depth, "Cylinder depth m")->default_val(20);
    measure_cmd->add_option("--guard", guard, "Minimum depth - level")->default_val(8);

    auto* interval_cmd = app.add_subcommand("interval", "Measure bounds of one interval [left, right]");
    add_poly(interval_cmd);
    interval_cmd->add_option("--left", left, "0, T, mid or digit string")->required();
    interval_cmd->add_option("--right", right, "0, T, mid or digit string")->required();
    interval_cmd->add_option("--depth", depth, "Cylinder depth m")->default_val(12);

    auto* branching_cmd = app.add_subcommand("branching", "Branching counts beta_n for sampled points");
    add_poly(branching_cmd);
    branching_cmd->add_option("--samples", samples, "Number of sampled digit strings")->default_val(20);
    branching_cmd->add_option("--N", N, "Digits per sample")->default_val(28);
    branching_cmd->add_option("--nmax", nmax, "Largest level")->default_val(20);
    branching_cmd->add_option("--guard", guard, "Digits kept beyond nmax")->default_val(8);
    branching_cmd->add_option("--x", x, "Single {0,1} digit string instead of samples");

    auto* density_cmd = app.add_subcommand("density", "Two-sided density bounds at points");
    add_poly(density_cmd);
    density_cmd->add_option("--points", points, "Comma list: 0, T, mid or digit strings")->default_val("0,mid");
    density_cmd->add_option("--m", m_list, "Comma list of radius exponents")->default_val("2,4,6");
    density_cmd->add_option("--guard", guard, "Counting depth beyond m")->default_val(8);

    auto* traces_cmd = app.add_subcommand("traces", "Exact traces tr(theta^n) and residuals");
    add_poly(traces_cmd);
    traces_cmd->add_option("--N", N, "Number of terms")->default_val(20);

    auto* salem_cmd = app.add_subcommand("salem-sums", "Partial sums of Re(theta_j^k) on the unit circle");
    salem_cmd->alias("salem_sums");
    add_poly(salem_cmd);
    salem_cmd->add_option("--N", N, "Number of terms")->default_val(100);

    auto* reduce_cmd = app.add_subcommand("reduce", "Square-root tower until an odd power appears");
    add_poly(reduce_cmd);
    reduce_cmd->add_option("--max-steps", max_steps, "Step cap")->default_val(6);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.poly_text = poly;
    const auto start = std::chrono::steady_clock::now();
    try {
        RunConfig& cfg = ctx.cfg;
        if (!config_path.empty()) apply_config(cfg, read_config(config_path));
        if (const char* env = std::getenv("BCLAB_CACHE_DIR"); env && *env) cfg.cache_dir = env;
        if (precision_bits) cfg.precision_bits = *precision_bits;
        if (budget) cfg.budget = *budget;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (!format_text.empty()) cfg.format = parse_format(format_text);
        if (json_flag + csv_flag + table_flag > 1) fail(ErrorCode::InvalidArgument, "choose one of --json, --csv, --table");
        if (json_flag) cfg.format = Format::Json;
        if (csv_flag) cfg.format = Format::Csv;
        if (table_flag) cfg.format = Format::Table;
        cfg.timing = timing;
        cfg.summary_path = summary_path;
        validate(cfg);
        if (!cfg.cache_dir.empty()) ctx.cache = std::make_unique<LevelCache>(cfg.cache_dir);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }

    Emitter em(ctx.cfg, ctx.command, out, err);
    try {
        json payload;
        const std::string& c = ctx.command;
        if (c == "classify") payload = cmd_classify(ctx, em);
        else if (c == "dn") payload = cmd_dn(ctx, em, nmax, epsilon);
        else if (c == "level") payload = cmd_level(ctx, em, n, alphabet);
        else if (c == "gaps") payload = cmd_gaps(ctx, em, nmax);
        else if (c == "gap-reduction") payload = cmd_gap_reduction(ctx, em, nmax);
        else if (c == "entropy") payload = cmd_entropy(ctx, em, nmax);
        else if (c == "measure") payload = cmd_measure(ctx, em, n, depth, guard);
        else if (c == "interval") payload = cmd_interval(ctx, em, left, right, depth);
        else if (c == "branching") payload = cmd_branching(ctx, em, samples, N, nmax, guard, x);
        else if (c == "density") payload = cmd_density(ctx, em, points, m_list, guard);
        else if (c == "traces") payload = cmd_traces(ctx, em, N);
        else if (c == "salem-sums") payload = cmd_salem_sums(ctx, em, N);
        else if (c == "reduce") payload = cmd_reduce(ctx, em, max_steps);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        em.finish(envelope(ctx, std::move(payload), seconds));
        return 0;
    } catch (const Error& e) {
        const int code = exit_code(e.code());
        err << "error: " << e.what() << "\n";
        if (ctx.cfg.format == Format::Json) {
            json line{{"type", "error"},
                      {"command", ctx.command},
                      {"error", error_name(e.code())},
                      {"exit_code", code},
                      {"message", e.what()}};
            if (const auto* r = dynamic_cast<const ReducibleInput*>(&e))
                line["factor"] = json{{"text", r->factor().to_string()}, {"coefficients", coefficients(r->factor())}};
            out << line.dump() << "\n";
        }
        return code;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bclab
