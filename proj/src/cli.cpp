#include "volcap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "volcap/errors.hpp"
#include "volcap/io.hpp"

namespace volcap::cli {
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kAnalyses = {"capacity", "spectrum", "fit",     "factorize",
                                         "bound",    "conditions", "realize", "model"};

struct ProblemSpec {
  std::optional<MatrixFunction> Z;
  std::optional<MatrixFunction> H;
  std::vector<std::string> analyses;
  int N = 256;
  double tol = 1e-10;
  std::optional<Window> window;
  int j_max = 8;
  std::string selector = "vertical";
  int moments = 1;
  int extra_constraints = 0;
  double fit_tolerance = 0.05;
  ModelSpectrum model;
  int model_count = 50;
  bool has_model = false;
};

MatrixFunction function_field(const json& value, const fs::path& base) {
  if (value.is_string()) {
    fs::path p = value.get<std::string>();
    if (p.is_relative()) p = base / p;
    return load_matrix_function(p.string());
  }
  if (value.is_object()) return matrix_function_from_json(value);
  throw ParseError("cli", "matrix function must be a file name or an inline object");
}

ProblemSpec parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cli", "cannot open spec file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cli", path + ": " + e.what());
  }
  ProblemSpec spec;
  const fs::path base = fs::path(path).parent_path();
  try {
    if (!j.is_object()) throw ParseError("cli", "spec must be a JSON object");
    if (j.contains("Z")) spec.Z = function_field(j["Z"], base);
    if (j.contains("H")) spec.H = function_field(j["H"], base);
    spec.analyses = j.at("analyses").get<std::vector<std::string>>();
    for (const auto& a : spec.analyses) {
      if (!kAnalyses.count(a)) throw ParseError("cli", "unknown analysis '" + a + "'");
    }
    spec.N = j.value("N", spec.N);
    spec.tol = j.value("tol", spec.tol);
    spec.j_max = j.value("j_max", spec.j_max);
    spec.extra_constraints = j.value("extra_constraints", spec.extra_constraints);
    spec.fit_tolerance = j.value("fit_tolerance", spec.fit_tolerance);
    if (j.contains("window")) {
      const auto w = j["window"].get<std::vector<int>>();
      if (w.size() != 2) throw ParseError("cli", "window must be [lo, hi]");
      spec.window = Window{w[0], w[1]};
    }
    if (j.contains("selector")) {
      spec.selector = j["selector"].value("kind", spec.selector);
      spec.moments = j["selector"].value("k", spec.moments);
      if (spec.selector != "vertical" && spec.selector != "none" && spec.selector != "moment") {
        throw ParseError("cli", "selector kind must be vertical, none or moment");
      }
    }
    if (j.contains("model")) {
      const auto& m = j["model"];
      spec.has_model = true;
      spec.model.mu = m.value("mu", 1.0);
      spec.model.k = m.value("k", 1);
      spec.model.length = m.value("length", 1.0);
      const std::string parity = m.value("parity", std::string("even"));
      if (parity != "even" && parity != "odd") throw ParseError("cli", "model parity must be even or odd");
      spec.model.parity = parity == "even" ? Parity::even : Parity::odd;
      spec.model_count = m.value("count", spec.model_count);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("cli", std::string("bad spec field: ") + e.what());
  }
  if (spec.N < 4 || spec.N > 4096) throw ParseError("cli", "N must lie in [4, 4096]");
  if (!(spec.tol > 0.0)) throw ParseError("cli", "tol must be positive");
  if (spec.j_max < 1 || spec.j_max > 32) throw ParseError("cli", "j_max must lie in [1, 32]");
  if (spec.extra_constraints < 0) throw ParseError("cli", "extra_constraints must be nonnegative");
  if (spec.model_count < 1) throw ParseError("cli", "model count must be >= 1");
  return spec;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cli", "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("cli", "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

// Portable uniform draw in [-1, 1): raw engine bits, no library distribution.
double uniform(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

struct Context {
  const ProblemSpec& spec;
  std::ostream& log;
  bool verbose;
  std::uint64_t seed;
  fs::path out;

  std::optional<MatrixFunction> compact_frame{};  // Z, or Z (-H)^{-1/2} when H is given
  std::optional<CapacityResult> capacity{};
  std::optional<SpectrumResult> spectrum{};
  std::optional<Restriction> restriction{};
  std::optional<Eigen::MatrixXd> galerkin{};
  std::optional<CapacityFit> fit{};
  std::optional<SkewFactorization> factorization{};
  std::optional<double> skew_bound{};
  std::optional<double> hessian{};

  json status = json::object();
  json checks = json::array();
  bool failed_check = false;
  bool error = false;

  void note(const std::string& msg) const {
    if (verbose) log << "volcap: " << msg << '\n';
  }

  const MatrixFunction& Z() const {
    if (!spec.Z) throw PreconditionError("cli", "this analysis needs Z");
    return *spec.Z;
  }

  const MatrixFunction& frame() {
    if (!compact_frame) compact_frame = spec.H ? legendre_rescaled(Z(), *spec.H) : Z();
    return *compact_frame;
  }

  SubspaceSelector selector() {
    if (spec.selector == "none") return SubspaceSelector::none();
    if (spec.selector == "moment") return SubspaceSelector::moment_constraints(spec.moments);
    return SubspaceSelector::vertical(frame());
  }

  Window window() const { return spec.window ? *spec.window : default_window(spec.N); }

  void check(const std::string& name, bool pass, json detail) {
    detail["name"] = name;
    detail["pass"] = pass;
    checks.push_back(std::move(detail));
    if (!pass) failed_check = true;
  }
};

void ensure_spectrum(Context& c) {
  if (c.spectrum) return;
  QuadraticFormSpec form = volterra_form(c.frame());
  form.constraint = c.selector();
  c.note("assembling Galerkin matrix, N = " + std::to_string(c.spec.N));
  c.galerkin = assemble(form, c.spec.N);
  c.restriction = restrict(*c.galerkin, form.constraint, c.frame().cols(), c.spec.N);
  c.spectrum = spectrum(c.restriction->matrix, c.restriction->asymmetry_residual, c.spec.N);
}

void ensure_capacity(Context& c) {
  if (!c.capacity) c.capacity = predict_capacity(c.frame(), SymplecticForm(c.frame().rows()), c.spec.j_max, c.spec.tol);
}

void ensure_factorization(Context& c) {
  if (!c.factorization) c.factorization = skew_factorize(volterra_form(c.frame()), c.spec.N, c.spec.tol);
}

void run_capacity(Context& c) {
  ensure_capacity(c);
  write_json(c.out / "capacity.json", to_json(*c.capacity));
}

void run_spectrum(Context& c) {
  ensure_spectrum(c);
  json j = to_json(*c.spectrum);
  j["selector"] = c.spec.selector;
  j["constraint_rank"] = c.restriction->constraint_rank;
  j["constraint_rank_deficient"] = c.restriction->rank_deficient;
  j["form"] = c.spec.H ? "compact part after v -> (-H)^(-1/2) v" : "Volterra form";
  write_json(c.out / "spectrum.json", j);
  std::ostringstream csv;
  write_spectrum_csv(csv, *c.spectrum);
  write_atomic(c.out / "spectrum.csv", csv.str());

  if (c.spec.extra_constraints > 0) {
    // Interlacing against a random further restriction of codimension d.
    const int d = c.spec.extra_constraints;
    const Eigen::Index k = c.frame().cols();
    std::mt19937_64 rng(c.seed);
    std::vector<Eigen::MatrixXd> power(3, Eigen::MatrixXd(d, k));
    for (auto& m : power) {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng);
    }
    const Eigen::MatrixXd extra = project_functionals(MatrixFunction::polynomial(power), c.spec.N);
    const Eigen::MatrixXd base = constraint_matrix(c.selector(), k, c.spec.N);
    Eigen::MatrixXd all(base.rows() + extra.rows(), base.cols());
    all << base, extra;
    const Restriction sub = restrict(*c.galerkin, all);
    const int codim = sub.constraint_rank - c.restriction->constraint_rank;
    const CheckReport r = check_restriction_stability(*c.spectrum, spectrum(sub.matrix), codim);
    json detail = to_json(r);
    detail["codimension"] = codim;
    c.check("restriction_interlacing", r.pass, detail);
  }
}

void run_fit(Context& c) {
  ensure_spectrum(c);
  c.fit = fit_capacity(*c.spectrum, c.window(), c.spec.j_max);
  write_json(c.out / "fit.json", to_json(*c.fit));
}

void run_factorize(Context& c) {
  ensure_factorization(c);
  write_json(c.out / "factorization.json", to_json(*c.factorization));
}

void run_bound(Context& c) {
  ensure_factorization(c);
  c.skew_bound = capacity_bound(*c.factorization);
  json j = {{"provenance", "computed"},
            {"skew_bound", {{"value", *c.skew_bound}, {"m", c.factorization->rank / 2}, {"provenance", "computed"}}}};
  const MatrixFunction H =
      c.spec.H ? *c.spec.H : MatrixFunction::constant(-Eigen::MatrixXd::Identity(c.Z().cols(), c.Z().cols()));
  const HessianBound hb = hessian_bound(c.Z(), H);
  c.hessian = hb.bound;
  j["hessian_bound"] = {{"value", hb.bound},
                        {"r_l2", hb.r_l2},
                        {"trace_integral", hb.trace_integral},
                        {"hessian_sampled", hb.sampled},
                        {"provenance", "computed"}};
  j["hessian"] = to_json(hb.hessian);
  write_json(c.out / "bound.json", j);
}

void run_conditions(Context& c) {
  json j = {{"provenance", "computed"}};
  const ConditionReport goh = goh_check(c.Z(), c.spec.tol);
  j["goh"] = to_json(goh);
  if (goh.pass) {
    j["glc"] = to_json(glc_check(c.Z(), c.spec.tol));
  } else {
    j["glc"] = {{"skipped", true}, {"message", "requires the Goh condition"}};
  }
  j["gram"] = to_json(gram(c.Z(), 1.0, c.spec.tol));
  json higher = json::array();
  for (const auto& e : higher_order_report(c.Z(), c.spec.j_max)) {
    higher.push_back({{"j", e.j},
                      {"sup", e.sup},
                      {"max_eigenvalue", e.max_eigenvalue},
                      {"min_eigenvalue", e.min_eigenvalue},
                      {"certified", e.j <= 2}});
  }
  j["higher_order"] = {{"experimental", true}, {"entries", higher}};
  write_json(c.out / "conditions.json", j);
}

void run_realize(Context& c) {
  const ControlProblemLQ lq = realize_lq(TripleSpec{c.Z()});
  const MatrixFunction back = lq_frame(lq);
  const bool identity = to_json(back) == to_json(c.Z());
  json j = {{"provenance", "computed"}, {"B", to_json(lq.B)}, {"Omega", to_json(lq.Omega)}, {"roundtrip_identity", identity}};
  write_json(c.out / "realization.json", j);
  c.check("realization_roundtrip", identity, json::object());
}

void run_model(Context& c) {
  if (!c.spec.has_model) throw PreconditionError("cli", "the model analysis needs a `model` block");
  const SpectrumResult s = exact_spectrum(c.spec.model, c.spec.model_count);
  std::ostringstream csv;
  write_model_csv(csv, s);
  write_atomic(c.out / "model.csv", csv.str());
}

void cross_checks(Context& c) {
  const double tol = c.spec.fit_tolerance;
  if (c.capacity && c.fit) {
    const CapacityResult& p = *c.capacity;
    const CapacityFit& f = *c.fit;
    if (p.infinite || f.infinite) {
      c.check("order", p.infinite == f.infinite,
              {{"predicted", p.infinite ? json("inf") : json(p.order)}, {"fitted", f.infinite ? json("inf") : json(f.order)}});
    } else {
      c.check("order", p.order == f.order, {{"predicted", p.order}, {"fitted", f.order}, {"slope", f.slope}});
      auto compare = [&](const std::string& name, double predicted, const SignFit& side, double scale) {
        const double fitted = side.available ? side.value : 0.0;
        const double err = std::abs(fitted - predicted) / scale;
        c.check(name, err <= tol,
                {{"predicted", predicted}, {"fitted", fitted}, {"relative_error", err}, {"tolerance", tol}});
      };
      if (p.order % 2 == 1) {
        const double scale = std::max(p.value, 1e-300);
        compare("capacity_plus", p.value, f.plus, scale);
        compare("capacity_minus", p.value, f.minus, scale);
      } else {
        // A vanishing side is compared on the scale of the other one.
        const double scale = std::max({p.value_plus, p.value_minus, 1e-300});
        compare("capacity_plus", p.value_plus, f.plus, std::max(p.value_plus, scale));
        compare("capacity_minus", p.value_minus, f.minus, std::max(p.value_minus, scale));
      }
    }
  }
  if (c.fit && !c.fit->infinite && c.fit->order == 1) {
    // Both bounds are attained by constant frames, so the comparison allows
    // for rounding in the last digits.
    const double fitted = std::max(c.fit->plus.value, c.fit->minus.value);
    const double slack = 1.0 - 1e-9;
    if (c.skew_bound) {
      c.check("skew_bound_vs_fit", *c.skew_bound >= slack * fitted, {{"bound", *c.skew_bound}, {"fitted", fitted}});
    }
    if (c.hessian) {
      c.check("hessian_bound_vs_fit", *c.hessian >= slack * fitted, {{"bound", *c.hessian}, {"fitted", fitted}});
    }
  }
  if (c.capacity && c.spectrum && !c.capacity->infinite) {
    // Plot data: computed lambda_n next to xi / (pi n)^j.
    const int j = c.capacity->order;
    const double xp = j % 2 ? c.capacity->value : c.capacity->value_plus;
    const double xm = j % 2 ? c.capacity->value : c.capacity->value_minus;
    std::ostringstream csv;
    csv << "n,lambda_n,predicted_lambda_n\n";
    const auto& s = *c.spectrum;
    for (std::size_t i = s.negative.size(); i-- > 0;) {
      const double n = static_cast<double>(i + 1);
      csv << -static_cast<long>(i + 1) << ',' << format_double(s.negative[i]) << ','
          << format_double(-xm / std::pow(std::numbers::pi * n, j)) << '\n';
    }
    for (std::size_t i = 0; i < s.positive.size(); ++i) {
      const double n = static_cast<double>(i + 1);
      csv << i + 1 << ',' << format_double(s.positive[i]) << ',' << format_double(xp / std::pow(std::numbers::pi * n, j)) << '\n';
    }
    write_atomic(c.out / "plot.csv", csv.str());
  }
}

}  // namespace

int run(const RunOptions& options, std::ostream& log) {
  ProblemSpec spec;
  try {
    spec = parse_spec(options.spec_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    log << "error: cli: cannot create " << options.out_dir << ": " << ec.message() << '\n';
    return 1;
  }

  Context c{spec, log, options.verbose, options.seed, fs::path(options.out_dir)};
  static const std::vector<std::pair<std::string, std::function<void(Context&)>>> order = {
      {"capacity", run_capacity},     {"spectrum", run_spectrum}, {"fit", run_fit},
      {"factorize", run_factorize},   {"bound", run_bound},       {"conditions", run_conditions},
      {"realize", run_realize},       {"model", run_model}};
  for (const auto& [name, fn] : order) {
    if (std::find(spec.analyses.begin(), spec.analyses.end(), name) == spec.analyses.end()) continue;
    c.note("running " + name);
    try {
      fn(c);
      c.status[name] = {{"status", "ok"}};
    } catch (const Error& e) {
      c.error = true;
      c.status[name] = {{"status", "error"}, {"module", e.module()}, {"message", e.what()}};
      log << "error in " << name << ": " << e.what() << '\n';
    } catch (const std::exception& e) {
      c.error = true;
      c.status[name] = {{"status", "error"}, {"module", "cli"}, {"message", e.what()}};
      log << "error in " << name << ": " << e.what() << '\n';
    }
  }
  try {
    cross_checks(c);
  } catch (const std::exception& e) {
    c.error = true;
    log << "error: cli: cross-checks: " << e.what() << '\n';
  }

  const int code = c.error ? 1 : (c.failed_check ? 2 : 0);
  json summary = {{"analyses", c.status}, {"cross_checks", c.checks}, {"seed", options.seed}, {"exit_code", code}};
  if (c.capacity) summary["predicted"] = to_json(*c.capacity, 0);
  if (c.fit) summary["fitted"] = to_json(*c.fit);
  if (c.skew_bound) summary["skew_bound"] = {{"value", *c.skew_bound}, {"provenance", "computed"}};
  if (c.hessian) summary["hessian_bound"] = {{"value", *c.hessian}, {"provenance", "computed"}};
  try {
    write_json(c.out / "summary.json", summary);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  if (c.verbose) log << "volcap: exit " << code << '\n';
  return code;
}

}  // namespace volcap::cli
