#pragma once

// Command dispatcher. Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.

#include "attain.hpp"
#include "bounds.hpp"
#include "catalog.hpp"
#include "cellfem.hpp"
#include "envelope.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "topopt.hpp"
#include "translation_bound.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tricomp::cli {

using json = nlohmann::json;

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// JSON object with a path for diagnostics; every key must be consumed or declared.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void allow(const std::set<std::string>& keys) const {
    for (const auto& [k, v] : j_.items())
      if (!keys.count(k)) throw ConfigError("unknown key '" + path_ + "/" + k + "'");
  }

  Section section(const std::string& key) const { return Section(j_.at(key), path_ + "/" + key); }

  double number(const std::string& key) const { return to_number(j_.at(key), path_ + "/" + key); }
  double number(const std::string& key, double def) const { return has(key) ? number(key) : def; }

  long long integer(const std::string& key, long long def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path_ + "/" + key + ": expected an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path_ + "/" + key + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path_ + "/" + key + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = j_.at(key);
    const std::string p = path_ + "/" + key;
    if (!v.is_array()) return {to_number(v, p)};
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_number(v[i], p + "/" + std::to_string(i)));
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  static double to_number(const json& v, const std::string& p) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "Infinity") return kInf;
    }
    throw ConfigError(p + ": expected a number or \"inf\"");
  }
  std::string where() const { return path_.empty() ? "config root" : path_; }

  const json& j_;
  std::string path_;
};

inline json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
  }
}

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "Infinity") {
      out.push_back(kInf);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

struct Flags {
  std::string config, kappa, gamma, m, s, out;
  std::optional<unsigned long long> seed;
  std::optional<unsigned> threads;
  // command specific
  std::optional<double> s_max;
  std::optional<int> steps, n;
  bool numerical = false;
};

// Settings shared by every command after merging JSON and flags.
struct Settings {
  json root = json::object();
  std::vector<double> kappa{1.0, 2.0, kInf};
  std::vector<double> gamma{1.0, 0.6, 0.0};
  std::optional<std::vector<double>> m;
  std::optional<StressTensor> load;
  std::string out;
  unsigned long long seed = 0;
  unsigned threads = 1;

  double k1() const { return kappa.at(0); }
  double k2() const { return kappa.size() > 1 && std::isfinite(kappa[1]) ? kappa[1] : NAN; }

  CatalogPhases phases() const { return {k1(), k2(), gamma.at(0), gamma.at(1), gamma.at(2)}; }

  Fractions fractions() const {
    if (!m) throw ConfigError("fractions required (--m m1,m2 or \"m\" in the config)");
    const auto& v = *m;
    if (v.size() != 2 && v.size() != 3) throw ConfigError("fractions need two or three entries");
    const double m3 = v.size() == 3 ? v[2] : 1.0 - v[0] - v[1];
    Fractions f{v[0], v[1], m3};
    for (double x : f)
      if (x < -1e-12 || x > 1.0 + 1e-12) throw ConfigError("fractions must lie in [0, 1]");
    if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-12) throw ConfigError("fractions must sum to one");
    return f;
  }

  StressTensor stress(const StressTensor& def = StressTensor::identity()) const { return load ? *load : def; }

  std::optional<Section> block(const std::string& name) const {
    if (!root.contains(name)) return std::nullopt;
    return Section(root.at(name), "/" + name);
  }
};

inline std::vector<double> gamma_from_list(const std::vector<double>& g, const std::string& where) {
  if (g.size() == 1) return {1.0, g[0], 0.0};
  if (g.size() == 3) return g;
  throw ConfigError(where + ": give one cost (intermediate phase) or three");
}

inline Settings merge(const Flags& f, const std::set<std::string>& command_blocks) {
  Settings st;
  if (!f.config.empty()) {
    st.root = load_json(f.config);
    Section root(st.root, "");
    std::set<std::string> allowed{"phases", "m", "load", "out", "seed", "threads"};
    allowed.insert(command_blocks.begin(), command_blocks.end());
    root.allow(allowed);
    if (root.has("phases")) {
      const auto ph = root.section("phases");
      ph.allow({"kappa", "gamma"});
      if (ph.has("kappa")) st.kappa = ph.numbers("kappa");
      if (ph.has("gamma")) st.gamma = gamma_from_list(ph.numbers("gamma"), ph.path() + "/gamma");
    }
    if (root.has("m")) st.m = root.numbers("m");
    if (root.has("load")) {
      const auto ld = root.section("load");
      ld.allow({"s", "tensor"});
      if (ld.has("s") == ld.has("tensor")) throw ConfigError("/load: give exactly one of 's' or 'tensor'");
      if (ld.has("s")) {
        st.load = ld.number("s") * StressTensor::identity();
      } else {
        const auto t = ld.numbers("tensor");
        if (t.size() != 3) throw ConfigError("/load/tensor: expected [sxx, syy, sxy]");
        st.load = StressTensor{t[0], t[1], t[2]};
      }
    }
    st.out = root.string("out", "");
    st.seed = (unsigned long long)root.integer("seed", 0);
    st.threads = (unsigned)root.integer("threads", 1);
  }
  if (!f.kappa.empty()) st.kappa = parse_list(f.kappa, "--kappa");
  if (!f.gamma.empty()) st.gamma = gamma_from_list(parse_list(f.gamma, "--gamma"), "--gamma");
  if (!f.m.empty()) st.m = parse_list(f.m, "--m");
  if (!f.s.empty()) st.load = parse_list(f.s, "--s").at(0) * StressTensor::identity();
  if (!f.out.empty()) st.out = f.out;
  if (f.seed) st.seed = *f.seed;
  if (f.threads) st.threads = *f.threads;
  if (st.threads == 0) throw ConfigError("--threads must be at least 1");
  if (st.kappa.empty() || !(st.k1() > 0.0)) throw ConfigError("kappa1 must be positive");
  if (st.kappa.size() > 3) throw ConfigError("at most three phases");
  return st;
}

inline void emit(const io::CsvWriter& w, const std::string& path) {
  if (!path.empty()) w.save(path);
}

inline int cmd_bound(const Settings& st, const Flags& f) {
  if (st.kappa.size() != 3) throw ConfigError("bound needs three compliances, e.g. --kappa 1,2,inf");
  const Fractions m = st.fractions();
  const PhaseSet ps = PhaseSet::of(st.kappa, {m[0], m[1], m[2]});
  const double wiener = wiener_bound(ps), hs = hs_bound(ps);
  const auto b2 = std::isinf(st.kappa[2]) ? three_material_bound(st.kappa[0], st.kappa[1], m[0], m[1])
                                           : BoundValue{NAN, 0};
  std::cout << "wiener " << io::num(wiener) << "\n"
            << "hs " << io::num(hs) << "\n";
  if (b2.branch) std::cout << "three_material " << io::num(b2.value) << " branch " << b2.branch << "\n";
  io::CsvWriter w({"m1", "m2", "m3", "wiener", "hs", "three_material", "branch", "translation", "t_opt"});
  std::string tv = "", tt = "";
  if (f.numerical) {
    TranslationBoundOptions o;
    o.seed = st.seed;
    o.threads = st.threads;
    const auto r = modified_translation_bound(ps, st.stress(), o);
    std::cout << "translation " << io::num(r.value) << " t " << io::num(r.t_opt) << "\n";
    tv = io::num(r.value);
    tt = io::num(r.t_opt);
  }
  w.row({io::num(m[0]), io::num(m[1]), io::num(m[2]), io::num(wiener), io::num(hs), io::num(b2.value),
         std::to_string(b2.branch), tv, tt});
  emit(w, st.out);
  return 0;
}

inline int cmd_envelope(const Settings& st, const Flags& f) {
  const double k1 = st.k1(), k2 = st.k2();
  const double g = st.gamma.at(1);
  if (std::isnan(k2)) throw ConfigError("envelope needs a finite intermediate compliance");
  double s_max = 1.5;
  int steps = 300;
  if (auto b = st.block("envelope")) {
    b->allow({"s_max", "steps"});
    s_max = b->number("s_max", s_max);
    steps = int(b->integer("steps", steps));
  }
  if (f.s_max) s_max = *f.s_max;
  if (f.steps) steps = *f.steps;
  if (!(s_max > 0.0) || steps < 1) throw ConfigError("envelope needs s_max > 0 and steps >= 1");
  const auto gi = gamma_interval(k1, k2);
  const bool inside = in_gamma_interval(k1, k2, g);
  if (!inside)
    std::cerr << "warning: gamma " << io::num(g) << " outside [" << io::num(gi.a) << ", " << io::num(gi.b)
              << "]; degenerate regimes, values from the brute-force envelope\n";
  else {
    const auto t = thresholds(k1, k2, g);
    std::cout << "rho " << io::num(t.rho1) << " " << io::num(t.rho2) << " " << io::num(t.rho3) << "\n";
  }
  if (st.load) {
    const double s = std::sqrt(st.load->frob2());
    const auto p = envelope_eval(s, k1, k2, g);
    std::cout << "s " << io::num(s) << " regime " << regime_name(p.regime) << " value " << io::num(p.value) << "\n";
  }
  io::CsvWriter w({"s", "regime", "m1", "m2", "m3", "value", "kappa_eff", "strain"});
  for (int i = 0; i <= steps; ++i) {
    const double s = s_max * i / steps;
    const auto p = envelope_eval(s, k1, k2, g);
    w.row({io::num(s), regime_name(p.regime), io::num(p.m[0]), io::num(p.m[1]), io::num(p.m[2]), io::num(p.value),
           io::num(p.kappa_eff), io::num(p.strain)});
  }
  if (st.out.empty())
    std::cout << w.str();
  else
    w.save(st.out);
  return 0;
}

inline CatalogOptions catalog_options(const Settings& st) {
  CatalogOptions o;
  o.seed = st.seed;
  o.threads = st.threads;
  return o;
}

inline int cmd_regimes(const Settings& st, const Flags& f) {
  double lmax = 2.0;
  int n = 64;
  if (auto b = st.block("regimes")) {
    b->allow({"lambda_max", "n"});
    lmax = b->number("lambda_max", lmax);
    n = int(b->integer("n", n));
  }
  if (f.s_max) lmax = *f.s_max;
  if (f.n) n = *f.n;
  if (n < 2 || !(lmax > 0.0)) throw ConfigError("regimes needs n >= 2 and lambda_max > 0");
  const auto axis = linspace(0.0, lmax, n);
  const auto map = regime_map(st.phases(), axis, axis, catalog_options(st));
  const std::string prefix = st.out.empty() ? "regimes" : st.out;
  io::save_ppm(regime_image(map), prefix + ".ppm");
  regime_csv(map).save(prefix + ".csv");
  std::cout << "wrote " << prefix << ".ppm and " << prefix << ".csv\n";
  return 0;
}

struct LaminateSpec {
  std::string structure;
  std::optional<Fractions> m;
};

inline LaminateSpec laminate_spec(const Settings& st, const std::optional<Section>& b) {
  LaminateSpec spec{"L(12,1)", st.m ? std::optional<Fractions>(st.fractions()) : std::nullopt};
  if (b) {
    spec.structure = b->string("structure", spec.structure);
  }
  if (catalog_index(spec.structure) < 0) throw ConfigError("unknown structure '" + spec.structure + "'");
  return spec;
}

inline CatalogResult build_structure(const Settings& st, const LaminateSpec& spec, const StressTensor& load) {
  const int idx = catalog_index(spec.structure);
  if (spec.m) {
    const auto r = structure_at_fractions(idx, st.phases(), load, *spec.m);
    if (!r) throw ConfigError(spec.structure + " cannot realize the requested fractions");
    return *r;
  }
  CatalogOptions o = catalog_options(st);
  o.allow_negative_det = true;
  return optimize_structure(idx, st.phases(), load, o);
}

inline void print_map(const ComplianceMap& map) {
  const Mat3& c = map.stiffness();
  std::cout << "stiffness (Mandel)\n";
  for (int i = 0; i < 3; ++i) std::cout << io::num(c(i, 0)) << " " << io::num(c(i, 1)) << " " << io::num(c(i, 2)) << "\n";
}

inline int cmd_laminate(const Settings& st, const Flags&) {
  auto b = st.block("laminate");
  if (b) b->allow({"structure"});
  const auto spec = laminate_spec(st, b);
  const StressTensor load = st.stress();
  const auto r = build_structure(st, spec, load);
  std::cout << "structure " << r.label << "\n"
            << "fractions " << io::num(r.m[0]) << " " << io::num(r.m[1]) << " " << io::num(r.m[2]) << "\n"
            << "energy " << io::num(r.energy) << "\n"
            << "cost " << io::num(r.cost) << "\n"
            << "angle " << io::num(r.angle) << "\n";
  print_map(r.map());
  io::CsvWriter w({"structure", "m1", "m2", "m3", "energy", "cost", "value", "angle", "p1", "p2", "p3", "p4"});
  w.row({r.label, io::num(r.m[0]), io::num(r.m[1]), io::num(r.m[2]), io::num(r.energy), io::num(r.cost),
         io::num(r.value), io::num(r.angle), io::num(r.params[0]), io::num(r.params[1]), io::num(r.params[2]),
         io::num(r.params[3])});
  emit(w, st.out);
  return 0;
}

inline int cmd_homogenize(const Settings& st, const Flags& f) {
  std::string kind = "laminate", file, arrangement = "hex";
  int n = 128;
  double m_core = 0.5, void_factor = 1e6;
  int core = 2, coat = 0;
  std::string structure = "L(12,1)";
  if (auto b = st.block("homogenize")) {
    b->allow({"kind", "n", "m_core", "core", "coat", "arrangement", "file", "void_factor", "structure"});
    kind = b->string("kind", kind);
    n = int(b->integer("n", n));
    m_core = b->number("m_core", m_core);
    core = int(b->integer("core", core));
    coat = int(b->integer("coat", coat));
    arrangement = b->string("arrangement", arrangement);
    file = b->string("file", file);
    void_factor = b->number("void_factor", void_factor);
    structure = b->string("structure", structure);
  }
  if (f.n) n = *f.n;
  std::vector<double> kappa{st.k1(), std::isnan(st.k2()) ? 2.0 * st.k1() : st.k2(), kInf};
  CellGrid g;
  if (kind == "laminate") {
    Settings local = st;
    LaminateSpec spec{structure, st.m ? std::optional<Fractions>(st.fractions()) : std::nullopt};
    if (catalog_index(structure) < 0) throw ConfigError("/homogenize/structure: unknown structure '" + structure + "'");
    const auto r = build_structure(local, spec, st.stress());
    g = rasterize_laminate(*r.node(), kappa, n);
  } else if (kind == "circles") {
    if (core < 0 || core > 2 || coat < 0 || coat > 2) throw ConfigError("/homogenize: phase index must be 0, 1 or 2");
    if (arrangement != "hex" && arrangement != "square") throw ConfigError("/homogenize/arrangement: hex or square");
    g = rasterize_coated_circles(core, coat, m_core, kappa, n,
                                 arrangement == "hex" ? CircleArrangement::Hex : CircleArrangement::Square);
  } else if (kind == "image") {
    if (file.empty()) throw ConfigError("/homogenize/file: required for kind 'image'");
    g = load_cell(file, kappa);
  } else {
    throw ConfigError("/homogenize/kind: expected laminate, circles or image");
  }
  HomogenizeOptions o;
  o.void_factor = void_factor;
  o.threads = st.threads;
  const auto res = homogenize_detailed(g, o);
  const auto fr = g.fractions();
  std::cout << "grid " << g.nx << " x " << g.ny << "\n"
            << "fractions " << io::num(fr[0]) << " " << io::num(fr[1]) << " " << io::num(fr[2]) << "\n"
            << "bulk " << io::num(res.map.bulk()) << "\n";
  print_map(res.map);
  if (!st.out.empty()) {
    save_cell(g, st.out + ".pgm");
    io::CsvWriter w({"row", "c0", "c1", "c2"});
    for (int i = 0; i < 3; ++i)
      w.row({std::to_string(i), io::num(res.map.stiffness()(i, 0)), io::num(res.map.stiffness()(i, 1)),
             io::num(res.map.stiffness()(i, 2))});
    w.save(st.out + ".csv");
  }
  return 0;
}

inline DesignProblem design_problem(const Settings& st) {
  DesignProblem p;
  p.phases = st.phases();
  p.seed = st.seed;
  p.threads = st.threads;
  if (auto b = st.block("topopt")) {
    b->allow({"nx", "ny", "height", "force", "omega", "max_iter", "tol", "ersatz", "aniso_fast", "catalog_only",
              "warm_start", "loads"});
    p.nx = int(b->integer("nx", p.nx));
    p.ny = int(b->integer("ny", p.ny));
    p.height = b->number("height", p.height);
    p.force = b->number("force", p.force);
    p.omega = b->number("omega", p.omega);
    p.max_iter = int(b->integer("max_iter", p.max_iter));
    p.tol = b->number("tol", p.tol);
    p.ersatz = b->number("ersatz", p.ersatz);
    p.aniso_fast = b->number("aniso_fast", p.aniso_fast);
    p.catalog_only = b->boolean("catalog_only", p.catalog_only);
    p.warm_start = b->boolean("warm_start", p.warm_start);
    if (b->has("loads")) {
      const json& arr = st.root.at("topopt").at("loads");
      if (!arr.is_array()) throw ConfigError("/topopt/loads: expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section l(arr[i], "/topopt/loads/" + std::to_string(i));
        l.allow({"ix", "iy", "fx", "fy"});
        p.loads.push_back({int(l.integer("ix", 0)), int(l.integer("iy", 0)), l.number("fx", 0.0), l.number("fy", 0.0)});
      }
    }
  }
  if (!(p.height > 0.0)) throw ConfigError("/topopt/height must be positive");
  p.validate();
  return p;
}

inline int cmd_topopt(const Settings& st, const Flags& f) {
  DesignProblem p = design_problem(st);
  if (f.n) {
    p.nx = *f.n;
    p.ny = std::max(1, *f.n / 2);
  }
  const std::string prefix = st.out.empty() ? "design" : st.out;
  const auto base = constant_baselines(p);
  const auto r = solve_design(p);
  export_design(r.design, prefix);
  history_csv(r).save(prefix + "_history.csv");
  std::cout << "objective " << io::num(r.history.back()) << "\n"
            << "iterations " << r.history.size() - 1 << "\n"
            << "baseline_kappa1 " << io::num(base.kappa1) << "\n"
            << "baseline_kappa2 " << io::num(base.kappa2) << "\n"
            << "baseline_half " << io::num(base.half) << "\n";
  if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
  return 0;
}

inline int cmd_attain(const Settings& st, const Flags& f) {
  AttainOptions o;
  o.threads = st.threads;
  std::string arrangement = "hex";
  if (auto b = st.block("attain")) {
    b->allow({"n", "arrangement", "void_factor"});
    o.n = int(b->integer("n", o.n));
    arrangement = b->string("arrangement", arrangement);
    o.fem.void_factor = b->number("void_factor", o.fem.void_factor);
  }
  if (f.n) o.n = *f.n;
  if (arrangement != "hex" && arrangement != "square") throw ConfigError("/attain/arrangement: hex or square");
  o.circles = arrangement == "hex" ? CircleArrangement::Hex : CircleArrangement::Square;
  CatalogPhases ph = st.phases();
  if (std::isnan(ph.k2)) throw ConfigError("attain needs three phases");
  const auto rows = attainability_report(ph, default_attain_cases(), o);
  const auto w = attain_csv(rows);
  if (st.out.empty())
    std::cout << w.str();
  else
    w.save(st.out);
  return 0;
}

inline int run(int argc, char** argv, std::ostream& err = std::cerr) {
  CLI::App app{"Bounds, envelopes, laminates and designs for three-material composites"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* c) {
    c->add_option("--config", f.config, "JSON configuration file");
    c->add_option("--kappa", f.kappa, "phase compliances, e.g. 1,2,inf");
    c->add_option("--gamma", f.gamma, "intermediate cost, or three costs");
    c->add_option("--m", f.m, "fractions m1,m2[,m3]");
    c->add_option("--s", f.s, "isotropic load intensity");
    c->add_option("--out", f.out, "output path or prefix");
    c->add_option("--seed", f.seed, "random seed");
    c->add_option("--threads", f.threads, "worker threads");
  };
  struct Cmd {
    const char* name;
    const char* help;
    std::set<std::string> blocks;
    int (*fn)(const Settings&, const Flags&);
  };
  const std::vector<Cmd> cmds{
      {"bound", "Wiener, Hashin-Shtrikman and three-material bounds", {}, cmd_bound},
      {"envelope", "isotropic relaxed energy along s", {"envelope"}, cmd_envelope},
      {"regimes", "catalog winner over principal stresses", {"regimes"}, cmd_regimes},
      {"laminate", "evaluate one catalog structure", {"laminate"}, cmd_laminate},
      {"homogenize", "periodic cell homogenization", {"homogenize"}, cmd_homogenize},
      {"topopt", "relaxed cantilever design", {"topopt"}, cmd_topopt},
      {"attain", "bound / catalog / FEM table", {"attain"}, cmd_attain},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    auto* s = app.add_subcommand(c.name, c.help);
    common(s);
    subs.push_back(s);
  }
  subs[0]->add_flag("--numerical", f.numerical, "also run the numerical translation bound");
  subs[1]->add_option("--s-max", f.s_max, "largest s");
  subs[1]->add_option("--steps", f.steps, "number of intervals");
  subs[2]->add_option("--lambda-max", f.s_max, "largest principal stress");
  subs[2]->add_option("--n", f.n, "samples per axis");
  subs[4]->add_option("--n", f.n, "pixels per side");
  subs[5]->add_option("--n", f.n, "elements along the length");
  subs[6]->add_option("--n", f.n, "pixels per side");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    for (std::size_t i = 0; i < cmds.size(); ++i)
      if (subs[i]->parsed()) return cmds[i].fn(merge(f, cmds[i].blocks), f);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tricomp::cli
