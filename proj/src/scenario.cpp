#include "fpme/cli.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fpme/field_io.hpp"

namespace fpme {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& v, double* out) {
    if (v.empty()) return false;
    const char* c = v.c_str();
    char* end = nullptr;
    double x = std::strtod(c, &end);
    if (end != c + v.size() || std::isnan(x)) return false;
    *out = x;
    return true;
}

bool parse_int(const std::string& v, int* out) {
    if (v.empty()) return false;
    const char* c = v.c_str();
    char* end = nullptr;
    long x = std::strtol(c, &end, 10);
    if (end != c + v.size() || x < INT_MIN || x > INT_MAX) return false;
    *out = static_cast<int>(x);
    return true;
}

const std::map<std::string, ExperimentKind>& kind_names() {
    static const std::map<std::string, ExperimentKind> m = {
        {"single_run", ExperimentKind::single_run},
        {"exhaustion", ExperimentKind::exhaustion},
        {"contraction_pair", ExperimentKind::contraction_pair},
        {"mass_experiment", ExperimentKind::mass_experiment},
        {"nonuniqueness", ExperimentKind::nonuniqueness},
        {"smoothing", ExperimentKind::smoothing},
        {"potential_decay", ExperimentKind::potential_decay},
        {"operator_validation", ExperimentKind::operator_validation},
    };
    return m;
}

const std::map<std::string, DatumKind>& datum_names() {
    static const std::map<std::string, DatumKind> m = {
        {"constant", DatumKind::constant},
        {"gaussian_bump", DatumKind::gaussian_bump},
        {"eigenmode", DatumKind::eigenmode},
        {"power_singularity", DatumKind::power_singularity},
        {"indicator_ball", DatumKind::indicator_ball},
    };
    return m;
}

const char* to_string(DatumKind k) {
    for (const auto& [name, kind] : datum_names())
        if (kind == k) return name.c_str();
    return "?";
}

const char* to_string(DensityKind k) {
    return k == DensityKind::constant ? "constant" : "power_tail";
}

// one violation per line; keeps the full list available to callers
std::string join_violations(const std::vector<std::string>& v) {
    std::string msg = "invalid scenario:";
    for (const std::string& s : v) msg += "\n  " + s;
    return msg;
}

struct Parser {
    Scenario s;
    std::vector<std::string> violations;

    void fail(const std::string& key, const std::string& what) {
        violations.push_back(key + ": " + what);
    }

    void set_double(const std::string& key, const std::string& v, double* dst) {
        if (!parse_double(v, dst)) fail(key, "'" + v + "' is not a number");
    }

    void set_int(const std::string& key, const std::string& v, int* dst) {
        if (!parse_int(v, dst)) fail(key, "'" + v + "' is not an integer");
    }

    template <class T>
    void set_enum(const std::string& key, const std::string& v,
                  const std::map<std::string, T>& names, T* dst) {
        auto it = names.find(v);
        if (it == names.end()) {
            std::string allowed;
            for (const auto& [name, kind] : names) {
                (void)kind;
                allowed += allowed.empty() ? name : ", " + name;
            }
            fail(key, "'" + v + "' is not one of {" + allowed + "}");
        } else {
            *dst = it->second;
        }
    }

    void set_list(const std::string& key, const std::string& v,
                  std::vector<double>* dst) {
        std::vector<double> out;
        std::istringstream in(v);
        std::string tok;
        while (in >> tok) {
            double x = 0.0;
            if (!parse_double(tok, &x)) {
                fail(key, "'" + tok + "' is not a number");
                return;
            }
            out.push_back(x);
        }
        if (out.empty()) {
            fail(key, "the list must not be empty");
            return;
        }
        *dst = std::move(out);
    }

    void set_datum(InitialDatum* d, const std::string& prefix,
                   const std::string& field, const std::string& key,
                   const std::string& v) {
        (void)prefix;
        if (field == "kind") set_enum(key, v, datum_names(), &d->kind);
        else if (field == "amplitude") set_double(key, v, &d->amplitude);
        else if (field == "width") set_double(key, v, &d->width);
        else if (field == "center.x") set_double(key, v, &d->center[0]);
        else if (field == "center.y") set_double(key, v, &d->center[1]);
        else if (field == "beta") set_double(key, v, &d->beta);
        else if (field == "radius") set_double(key, v, &d->radius);
        else if (field == "cap") set_double(key, v, &d->cap);
        else fail(key, "unknown key");
    }

    bool apply(const std::string& key, const std::string& v) {
        if (key == "name") s.name = v;
        else if (key == "kind") set_enum(key, v, kind_names(), &s.kind);
        else if (key == "N") set_int(key, v, &s.N);
        else if (key == "sigma") set_double(key, v, &s.params.sigma);
        else if (key == "m") set_double(key, v, &s.params.m);
        else if (key == "density.kind") {
            static const std::map<std::string, DensityKind> names = {
                {"constant", DensityKind::constant},
                {"power_tail", DensityKind::power_tail}};
            set_enum(key, v, names, &s.density.kind);
        } else if (key == "density.c") set_double(key, v, &s.density.c);
        else if (key == "density.alpha") set_double(key, v, &s.density.alpha);
        else if (key == "density.s0") set_double(key, v, &s.density.s0);
        else if (key.rfind("datum.", 0) == 0)
            set_datum(&s.datum, "datum.", key.substr(6), key, v);
        else if (key.rfind("datum2.", 0) == 0)
            set_datum(&s.datum2, "datum2.", key.substr(7), key, v);
        else if (key == "grid.h") set_double(key, v, &s.h);
        else if (key == "grid.radii") set_list(key, v, &s.radii);
        else if (key == "dt") set_double(key, v, &s.stepper.dt);
        else if (key == "newton_tol") set_double(key, v, &s.stepper.newton_tol);
        else if (key == "newton_max") set_int(key, v, &s.stepper.newton_max);
        else if (key == "cg_tol") set_double(key, v, &s.stepper.cg_tol);
        else if (key == "cg_max") set_int(key, v, &s.stepper.cg_max);
        else if (key == "T") set_double(key, v, &s.T);
        else if (key == "sampling") {
            static const std::map<std::string, SamplePolicy::Kind> names = {
                {"every_step", SamplePolicy::Kind::every_step},
                {"geometric", SamplePolicy::Kind::geometric}};
            set_enum(key, v, names, &s.sampling.kind);
        } else if (key == "sampling.t0") set_double(key, v, &s.sampling.t0);
        else if (key == "tau") set_double(key, v, &s.tau);
        else if (key == "fit.t_lo") set_double(key, v, &s.fit_lo);
        else if (key == "fit.t_hi") set_double(key, v, &s.fit_hi);
        else if (key == "out") s.out = v;
        else return false;
        return true;
    }
};

bool name_is_pathsafe(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' &&
            c != '_' && c != '-')
            return false;
    return true;
}

// interior node count for a target spacing, forced odd so the origin is a
// node (the decay fits walk the positive half-axis from it)
int derived_nodes(double R, double h) {
    long n = std::lround(2.0 * R / h) - 1;
    if (n % 2 == 0) n += 1;
    return static_cast<int>(n);
}

bool uses_pde(ExperimentKind k) {
    return k != ExperimentKind::potential_decay &&
           k != ExperimentKind::operator_validation;
}

void validate(const Scenario& s, std::vector<std::string>& out) {
    auto req = [&out](bool ok, const std::string& msg) {
        if (!ok) out.push_back(msg);
    };

    req(name_is_pathsafe(s.name),
        "name: must be nonempty and use only letters, digits, '.', '_', '-'");
    req(s.N == 1 || s.N == 2, "N: the grid supports N = 1 or N = 2");
    req(s.params.sigma > 0.0 && s.params.sigma < 2.0,
        "sigma: must satisfy 0 < sigma < 2");
    req(s.params.m >= 1.0, "m: must satisfy m >= 1");

    req(s.density.c > 0.0, "density.c: must be positive");
    if (s.density.kind == DensityKind::power_tail) {
        req(s.density.alpha > 0.0, "density.alpha: must be positive");
        req(s.density.s0 > 0.0, "density.s0: must be positive");
    }

    req(s.h > 0.0, "grid.h: must be positive");
    bool radii_ok = !s.radii.empty();
    for (std::size_t j = 0; j < s.radii.size(); ++j) {
        if (s.radii[j] <= 0.0 || (j > 0 && s.radii[j] <= s.radii[j - 1])) {
            radii_ok = false;
            break;
        }
    }
    req(radii_ok, "grid.radii: must be positive and strictly increasing");
    if (radii_ok && s.h > 0.0) {
        for (double R : s.radii)
            if (derived_nodes(R, s.h) < 8) {
                out.push_back("grid.h: spacing " + format_double(s.h) +
                              " leaves fewer than 8 interior nodes at radius " +
                              format_double(R));
                break;
            }
    }

    auto check_datum = [&](const InitialDatum& d, const std::string& p) {
        req(d.amplitude >= 0.0, p + "amplitude: must be nonnegative");
        req(d.cap > 0.0, p + "cap: must be positive");
        if (d.kind == DatumKind::gaussian_bump)
            req(d.width > 0.0, p + "width: must be positive");
        if (d.kind == DatumKind::power_singularity)
            req(d.beta > 0.0 && d.beta < s.N,
                p + "beta: must satisfy 0 < beta < N");
        if (d.kind == DatumKind::indicator_ball)
            req(d.radius > 0.0, p + "radius: must be positive");
    };

    if (uses_pde(s.kind)) {
        check_datum(s.datum, "datum.");
        req(s.stepper.dt > 0.0, "dt: must be positive");
        req(s.T > 0.0, "T: must be positive");
        if (s.stepper.dt > 0.0 && s.T > 0.0)
            req(s.stepper.dt <= s.T, "dt: must not exceed the horizon T");
        req(s.stepper.newton_tol > 0.0, "newton_tol: must be positive");
        req(s.stepper.cg_tol > 0.0, "cg_tol: must be positive");
        req(s.stepper.newton_max >= 1, "newton_max: must be at least 1");
        req(s.stepper.cg_max >= 1, "cg_max: must be at least 1");
        if (s.sampling.kind == SamplePolicy::Kind::geometric) {
            req(s.sampling.t0 > 0.0, "sampling.t0: must be positive");
            if (s.sampling.t0 > 0.0 && s.T > 0.0)
                req(s.sampling.t0 <= s.T,
                    "sampling.t0: the first geometric sample must not exceed T");
        }
    }

    switch (s.kind) {
        case ExperimentKind::exhaustion: {
            req(s.radii.size() >= 2,
                "grid.radii: exhaustion needs at least two radii");
            if (radii_ok && s.radii.size() >= 2) {
                for (double R : s.radii) {
                    double q = R / s.radii.front();
                    if (std::abs(q - std::lround(q)) > 1e-9 * q) {
                        out.push_back(
                            "grid.radii: exhaustion radii must be integer "
                            "multiples of the smallest one");
                        break;
                    }
                }
            }
            break;
        }
        case ExperimentKind::contraction_pair:
            check_datum(s.datum2, "datum2.");
            break;
        case ExperimentKind::nonuniqueness: {
            req(s.N >= 2, "kind: nonuniqueness needs N >= 2");
            req(s.datum.kind == DatumKind::constant && s.datum.amplitude > 0.0,
                "datum.kind: nonuniqueness needs a constant positive datum");
            TailClass tc = s.density.tail_class(s.params.sigma, s.N);
            req(tc == TailClass::A2 || tc == TailClass::A2star,
                "density.alpha: nonuniqueness needs a fast-decaying density, "
                "alpha > sigma");
            req(s.sampling.kind == SamplePolicy::Kind::every_step,
                "sampling: flux accumulation needs every_step samples");
            req(s.tau >= 0.0 && s.tau < s.T,
                "tau: must satisfy 0 <= tau < T");
            if (s.stepper.dt > 0.0 && s.tau >= 0.0) {
                double q = s.tau / s.stepper.dt;
                req(std::abs(q - std::lround(q)) <= 1e-9 * (1.0 + q),
                    "tau: must lie on the step lattice (a multiple of dt)");
            }
            break;
        }
        case ExperimentKind::smoothing: {
            req(s.params.sigma == 1.0,
                "sigma: the smoothing rate theta = 1/(m - 1 + 1/N) needs "
                "sigma = 1");
            req(s.fit_lo > 0.0, "fit.t_lo: must be positive");
            double hi = s.fit_hi == 0.0 ? s.T : s.fit_hi;
            req(s.fit_lo < hi, "fit.t_lo: must lie below the fit window end");
            req(hi <= s.T, "fit.t_hi: must not exceed the horizon T");
            break;
        }
        case ExperimentKind::potential_decay: {
            req(s.N == 2, "kind: potential_decay needs N = 2");
            req(s.density.kind == DensityKind::power_tail &&
                    s.density.alpha > s.params.sigma,
                "density.alpha: potential_decay needs a power tail with "
                "alpha > sigma");
            break;
        }
        default:
            break;
    }
}

}  // namespace

const char* to_string(ExperimentKind k) {
    for (const auto& [name, kind] : kind_names())
        if (kind == k) return name.c_str();
    return "?";
}

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)),
      violations_(std::move(violations)) {}

Scenario parse_scenario(const std::string& text) {
    Parser p;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            p.violations.push_back("line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            p.violations.push_back("line " + std::to_string(lineno) +
                                   ": empty key");
            continue;
        }
        if (!seen.insert(key).second) {
            p.fail(key, "duplicate key");
            continue;
        }
        if (!p.apply(key, value)) p.fail(key, "unknown key");
    }
    validate(p.s, p.violations);
    if (!p.violations.empty()) throw ScenarioError(std::move(p.violations));
    return p.s;
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& v) {
        out += key + " = " + v + "\n";
    };
    auto kd = [&](const std::string& key, double v) { kv(key, format_double(v)); };
    auto datum_block = [&](const std::string& p, const InitialDatum& d) {
        kv(p + "kind", to_string(d.kind));
        kd(p + "amplitude", d.amplitude);
        kd(p + "width", d.width);
        kd(p + "center.x", d.center[0]);
        kd(p + "center.y", d.center[1]);
        kd(p + "beta", d.beta);
        kd(p + "radius", d.radius);
        kd(p + "cap", d.cap);
    };

    kv("name", s.name);
    kv("kind", to_string(s.kind));
    kv("N", std::to_string(s.N));
    kd("sigma", s.params.sigma);
    kd("m", s.params.m);
    kv("density.kind", to_string(s.density.kind));
    kd("density.c", s.density.c);
    kd("density.alpha", s.density.alpha);
    kd("density.s0", s.density.s0);
    datum_block("datum.", s.datum);
    datum_block("datum2.", s.datum2);
    kd("grid.h", s.h);
    std::string radii;
    for (double R : s.radii)
        radii += (radii.empty() ? "" : " ") + format_double(R);
    kv("grid.radii", radii);
    kd("dt", s.stepper.dt);
    kd("newton_tol", s.stepper.newton_tol);
    kv("newton_max", std::to_string(s.stepper.newton_max));
    kd("cg_tol", s.stepper.cg_tol);
    kv("cg_max", std::to_string(s.stepper.cg_max));
    kd("T", s.T);
    kv("sampling", s.sampling.kind == SamplePolicy::Kind::every_step
                       ? "every_step"
                       : "geometric");
    kd("sampling.t0", s.sampling.t0);
    kd("tau", s.tau);
    kd("fit.t_lo", s.fit_lo);
    kd("fit.t_hi", s.fit_hi);
    kv("out", s.out);
    return out;
}

Grid scenario_grid(const Scenario& s, double radius) {
    return make_grid(s.N, radius, derived_nodes(radius, s.h));
}

}  // namespace fpme
