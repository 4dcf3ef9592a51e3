#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "wrt/verify.hpp"

using json = nlohmann::ordered_json;
using namespace wrt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitUsage = 64;

struct Config {
  long precision = 192;
  long kmin = 200, kmax = 2000, kstep = 11;
  std::string out;
  std::string format = "csv";
  int threads = 1;

  KRange range() const { return {kmin, kmax, kstep}; }
  void validate() const {
    if (precision < 64) throw DomainError("precision must be at least 64 bits");
    if (kmin < 3) throw DomainError("kmin must be at least 3");
    if (kmax < kmin) throw DomainError("kmax must be >= kmin");
    if (kstep < 1) throw DomainError("kstep must be >= 1");
    if (threads < 1) throw DomainError("threads must be >= 1");
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string dec_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jreal(const BigReal& x) { return {{"value", x.to_double()}, {"dec", x.to_string()}, {"hex", x.to_hex()}}; }
json jdouble(double x) { return {{"value", x}, {"dec", dec_double(x)}, {"hex", hex_double(x)}}; }
json jcomplex(const BigComplex& z) { return {{"re", jreal(z.re())}, {"im", jreal(z.im())}}; }
json jcomplex(const cd& z) { return {{"re", jdouble(z.real())}, {"im", jdouble(z.imag())}}; }

std::string csv_complex_row(const std::string& key, const BigComplex& z) {
  return key + "," + z.re().to_string() + "," + z.im().to_string() + "," + abs(z).to_string() + "," + arg(z).to_string();
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw DomainError("cannot open output file " + cfg.out);
  f << text;
}

json header(const std::string& kind, const Config& cfg) {
  return {{"schema", "v1"}, {"kind", kind}, {"precision", cfg.precision}};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("not a number: " + item);
    }
  }
  return out;
}

PointE parse_point(const std::string& s) {
  auto v = parse_list(s);
  if (v.size() != 2) throw UsageError("a point is written P,Q");
  return PointE(v[0], v[1]);
}

json fit_json(const FitReport& r, const Config& cfg) {
  json j = header("fit", cfg);
  j["subject"] = r.subject;
  j["k"] = {{"min", r.ks.front()}, {"max", r.ks.back()}, {"count", r.ks.size()}, {"step", cfg.kstep}};
  json atoms = json::array();
  for (size_t i = 0; i < r.atoms.size(); ++i) {
    const auto& a = r.atoms[i];
    json e;
    e["label"] = a.label;
    e["n"] = a.n;
    e["cs_arg"] = jreal(arg(a.phase));
    e["coefficient"] = jcomplex(r.coefficients[i]);
    e["abs"] = jdouble(std::abs(r.coefficients[i]));
    e["predicted_a0"] = jdouble(a.predicted);
    e["amplitude_error"] = std::isnan(r.amplitude_error[i]) ? json(nullptr) : jdouble(r.amplitude_error[i]);
    e["pi4_grid_distance"] = jdouble(r.grid_distance[i]);
    atoms.push_back(e);
  }
  j["atoms"] = atoms;
  j["relative_residual"] = jdouble(r.relative_residual);
  j["decay_exponent"] = jdouble(r.decay_exponent);
  j["decay_stderr"] = jdouble(r.decay_stderr);
  j["condition"] = jdouble(r.condition);
  return j;
}

// ---------------------------------------------------------------------------

int cmd_jones(const Config& cfg, const std::string& knot_s, long k, long l, long symbolic) {
  KnotId knot = parse_knot(knot_s);
  if (symbolic > 0) {
    IntLaurentPoly p = colored_jones_laurent(knot, symbolic);
    if (cfg.format == "json") {
      json j = header("jones-polynomial", cfg);
      j["knot"] = to_string(knot);
      j["color"] = symbolic;
      j["polynomial"] = p.to_string();
      emit(cfg, j.dump(2) + "\n");
    } else {
      emit(cfg, p.to_string() + "\n");
    }
    return kExitOk;
  }
  if (l != 0) {
    auto ks = cfg.range().ks();
    std::vector<BigReal> vals(ks.size());
    parallel_for(static_cast<long>(ks.size()), cfg.threads,
                 [&](long i) { vals[static_cast<size_t>(i)] = jones_at_root(knot, l, ks[static_cast<size_t>(i)]); });
    if (cfg.format == "json") {
      json j = header("jones-series", cfg);
      j["knot"] = to_string(knot);
      j["l"] = l;
      json rows = json::array();
      for (size_t i = 0; i < ks.size(); ++i) rows.push_back({{"k", ks[i]}, {"value", jcomplex(BigComplex(vals[i]))}});
      j["rows"] = rows;
      emit(cfg, j.dump(2) + "\n");
    } else {
      std::string s = "k,re,im,abs,arg\n";
      for (size_t i = 0; i < ks.size(); ++i) s += csv_complex_row(std::to_string(ks[i]), BigComplex(vals[i])) + "\n";
      emit(cfg, s);
    }
    return kExitOk;
  }
  if (k < 2) throw UsageError("jones needs --k K, --l L with a k range, or --symbolic N");
  ColoredJonesTable tab = jones_table(knot, k);
  if (cfg.format == "json") {
    json j = header("jones-table", cfg);
    j["knot"] = to_string(knot);
    j["k"] = k;
    json rows = json::array();
    for (long i = 0; i < 2 * k; ++i) rows.push_back({{"l", i}, {"value", jcomplex(tab.at(i))}});
    j["rows"] = rows;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string s = "l,re,im,abs,arg\n";
    for (long i = 0; i < 2 * k; ++i) s += csv_complex_row(std::to_string(i), tab.at(i)) + "\n";
    emit(cfg, s);
  }
  return kExitOk;
}

int cmd_state(const Config& cfg, const std::string& knot_s, long k) {
  KnotId knot = parse_knot(knot_s);
  if (k < 3) throw UsageError("state needs --k K with K >= 3");
  StateVector st = build_state(knot, k);
  if (cfg.format == "json") {
    json j = header("state", cfg);
    j["knot"] = to_string(knot);
    j["k"] = k;
    if (knot == KnotId::FigureEight) {
      QdiffResult q = qdiff_residual_of(st);
      j["qdiff_residual"] = jreal(q.residual);
      j["qdiff_scale"] = jreal(q.scale);
    }
    json rows = json::array();
    for (long l = 0; l < 2 * k; ++l) rows.push_back({{"l", l}, {"value", jcomplex(st.at(l))}});
    j["coefficients"] = rows;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string s = "l,re,im,abs,arg\n";
    for (long l = 0; l < 2 * k; ++l) s += csv_complex_row(std::to_string(l), st.at(l)) + "\n";
    emit(cfg, s);
  }
  return kExitOk;
}

int cmd_wrt(const Config& cfg, const std::string& knot_s, long p, long q) {
  KnotId knot = parse_knot(knot_s);
  Slope s(p, q);
  auto ks = cfg.range().ks();
  std::vector<BigComplex> vals(ks.size());
  parallel_for(static_cast<long>(ks.size()), cfg.threads, [&](long i) {
    vals[static_cast<size_t>(i)] = wrt_invariant(build_state(knot, ks[static_cast<size_t>(i)]), s);
  });
  if (cfg.format == "json") {
    json j = header("wrt-series", cfg);
    j["knot"] = to_string(knot);
    j["slope"] = {s.p, s.q};
    j["word"] = MappingClass::for_slope(s.p, s.q).str();
    j["anomaly"] = anomaly_convention();
    json rows = json::array();
    for (size_t i = 0; i < ks.size(); ++i) rows.push_back({{"k", ks[i]}, {"value", jcomplex(vals[i])}});
    j["rows"] = rows;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out = "k,re,im,abs,arg\n";
    for (size_t i = 0; i < ks.size(); ++i) out += csv_complex_row(std::to_string(ks[i]), vals[i]) + "\n";
    emit(cfg, out);
  }
  return kExitOk;
}

int cmd_charvar(const Config& cfg, long p, long q) {
  Slope s(p, q);
  IntersectionSet inter = intersect_line(s);
  if (cfg.format == "json") {
    json j = header("intersection", cfg);
    j["slope"] = {s.p, s.q};
    j["zero_count"] = inter.zero_count();
    json pts = json::array();
    for (const auto& x : inter.points) {
      pts.push_back({{"t", jreal(x.t)},
                     {"p", jreal(x.p)},
                     {"q", jreal(x.q)},
                     {"class", to_string(x.cls)},
                     {"branch", to_string(x.branch)},
                     {"multiplicity", x.multiplicity},
                     {"transversal", x.transversal},
                     {"representative", x.representative},
                     {"tangent_slope", std::isfinite(x.tangent_slope) ? json(x.tangent_slope) : json("inf")},
                     {"ell", x.ell}});
    }
    j["points"] = pts;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out = "t,p,q,class,branch,multiplicity,transversal,representative,tangent_slope\n";
    for (const auto& x : inter.points) {
      out += x.t.to_string() + "," + x.p.to_string() + "," + x.q.to_string() + "," + to_string(x.cls) + "," +
             to_string(x.branch) + "," + std::to_string(x.multiplicity) + "," + (x.transversal ? "1" : "0") + "," +
             (x.representative ? "1" : "0") + "," + dec_double(x.tangent_slope) + "\n";
    }
    emit(cfg, out);
  }
  return kExitOk;
}

int cmd_predict(const Config& cfg, long p, long q) {
  Slope s(p, q);
  auto pred = predict(s);
  if (cfg.format == "csv") {
    std::string out = "class,t,p,q,ell,cs_re,cs_im,cs_arg,n,a0,torsion\n";
    for (const auto& d : pred) {
      out += to_string(d.cls) + "," + d.boundary_point.t.to_string() + "," + d.boundary_point.p.to_string() + "," +
             d.boundary_point.q.to_string() + "," + std::to_string(d.ell) + "," + d.cs_phase.re().to_string() + "," +
             d.cs_phase.im().to_string() + "," + arg(d.cs_phase).to_string() + "," + dec_double(d.n) + "," +
             d.a0.to_string() + "," + d.torsion_value.to_string() + "\n";
    }
    emit(cfg, out);
    return kExitOk;
  }
  json j = header("prediction", cfg);
  j["slope"] = {s.p, s.q};
  j["report"] = analyze_slope(s).summary();
  json rows = json::array();
  for (const auto& d : pred) {
    json e;
    e["class"] = to_string(d.cls);
    e["boundary_point"] = {{"t", jreal(d.boundary_point.t)},
                           {"p", jreal(d.boundary_point.p)},
                           {"q", jreal(d.boundary_point.q)},
                           {"branch", to_string(d.boundary_point.branch)}};
    if (d.ell >= 0) e["ell"] = d.ell;
    e["cs_phase"] = jcomplex(d.cs_phase);
    e["cs_arg"] = jreal(arg(d.cs_phase));
    e["torsion_density"] = {{"magnitude", jreal(d.torsion.magnitude)}, {"frame", to_string(d.torsion.frame)}};
    e["torsion"] = jreal(d.torsion_value);
    e["n"] = d.n;
    e["a0"] = jreal(d.a0);
    rows.push_back(e);
  }
  j["entries"] = rows;
  emit(cfg, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const Config& cfg, long p, long q, bool central, bool hikami) {
  Slope s(p, q);
  auto ks = cfg.range().ks();
  FitReport r;
  if (hikami) {
    if (!(s == Slope(1, 1))) throw DomainError("--hikami applies to the (1,1) filling only");
    r = fit_atoms("Sigma(2,3,7) printed data", hikami_atoms(false), ks, wrt_values(s, ks, cfg.threads));
  } else {
    FitOptions opt;
    opt.threads = cfg.threads;
    opt.include_central = central;
    r = fit_expansion(s, ks, opt);
  }
  if (cfg.format == "csv") {
    std::string out = "label,n,cs_arg,re,im,abs,predicted,amplitude_error,pi4_grid_distance\n";
    for (size_t i = 0; i < r.atoms.size(); ++i) {
      out += r.atoms[i].label + "," + dec_double(r.atoms[i].n) + "," + arg(r.atoms[i].phase).to_string() + "," +
             dec_double(r.coefficients[i].real()) + "," + dec_double(r.coefficients[i].imag()) + "," +
             dec_double(std::abs(r.coefficients[i])) + "," + dec_double(r.atoms[i].predicted) + "," +
             dec_double(r.amplitude_error[i]) + "," + dec_double(r.grid_distance[i]) + "\n";
    }
    emit(cfg, out);
  } else {
    json j = fit_json(r, cfg);
    bool amp = true, grid = true;
    for (size_t i = 0; i < r.atoms.size(); ++i) {
      if (r.atoms[i].n != 0) continue;
      amp = amp && std::abs(r.amplitude_error[i]) <= 0.02;
      grid = grid && r.grid_distance[i] <= 0.02;
    }
    j["checks"] = {{"irreducible_amplitudes_within_2pct", amp},
                   {"phases_within_0.02_of_pi4_grid", grid},
                   {"decay_exponent_le_-0.5", r.decay_exponent <= -0.5}};
    emit(cfg, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_pointwise(const Config& cfg, const std::string& kind, const std::string& qs_s) {
  auto ks = cfg.range().ks();
  PointwiseReport rep;
  std::vector<double> qs;
  if (kind == "irreducible") {
    qs = qs_s.empty() ? std::vector<double>{0.19, 0.3} : parse_list(qs_s);
    rep = pointwise_irreducible_check(qs, ks, cfg.threads);
  } else if (kind == "abelian") {
    qs = qs_s.empty() ? std::vector<double>{0.05, 0.45} : parse_list(qs_s);
    rep = pointwise_abelian_check(qs, ks, cfg.threads);
  } else {
    throw UsageError("--kind must be irreducible or abelian");
  }
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  if (cfg.format == "json") {
    json j = header("pointwise-" + kind, cfg);
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"k", r.k}, {"q", r.q}, {"p", r.p}, {"measured", jdouble(r.measured)},
                      {"predicted", jdouble(r.predicted)}, {"rel_error", jdouble(r.rel_error)}, {"phase", jdouble(r.phase)}});
    j["rows"] = rows;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out = "k,q,p,measured,predicted,rel_error,phase\n";
    for (const auto& r : rep.rows)
      out += std::to_string(r.k) + "," + dec_double(r.q) + "," + dec_double(r.p) + "," + dec_double(r.measured) + "," +
             dec_double(r.predicted) + "," + dec_double(r.rel_error) + "," + dec_double(r.phase) + "\n";
    emit(cfg, out);
  }
  return kExitOk;
}

int cmd_microsupport(const Config& cfg, const std::vector<std::string>& points_s) {
  std::vector<PointE> pts;
  for (const auto& s : points_s) pts.push_back(parse_point(s));
  if (pts.empty()) pts = {PointE(0.3, 0.0), PointE(0.35, 0.0), PointE(0.4, 0.0)};
  auto rows = microsupport_check(pts, cfg.range().ks(), cfg.threads);
  if (cfg.format == "json") {
    json j = header("microsupport", cfg);
    json arr = json::array();
    for (const auto& r : rows) {
      json vals = json::array();
      for (size_t i = 0; i < r.ks.size(); ++i) vals.push_back({{"k", r.ks[i]}, {"abs", jdouble(r.values[i])}});
      arr.push_back({{"p", r.p}, {"q", r.q}, {"loglog_slope", jdouble(r.slope)}, {"values", vals}});
    }
    j["points"] = arr;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out = "k,p,q,abs\n";
    for (const auto& r : rows)
      for (size_t i = 0; i < r.ks.size(); ++i)
        out += std::to_string(r.ks[i]) + "," + dec_double(r.p) + "," + dec_double(r.q) + "," + dec_double(r.values[i]) + "\n";
    emit(cfg, out);
    for (const auto& r : rows) std::cerr << "point (" << r.p << "," << r.q << "): log-log slope " << r.slope << "\n";
  }
  return kExitOk;
}

std::string slope_csv_row(const SlopeReport& r) {
  std::string ev = r.h2.evidence;
  for (char& c : ev)
    if (c == ',') c = ';';
  return std::to_string(r.slope.p) + "," + std::to_string(r.slope.q) + "," + (r.h1.pass ? "pass" : "fail") + "," +
         std::to_string(r.h1.p_mod_4) + "," + to_string(r.h2.status) + "," + std::to_string(r.h2.modl_prime) + "," + ev + "\n";
}

json slope_json(const SlopeReport& r) {
  json j = {{"p", r.slope.p},
            {"q", r.slope.q},
            {"h1", r.h1.pass ? "pass" : "fail"},
            {"p_mod_4", r.h1.p_mod_4},
            {"method", to_string(r.method)},
            {"h2", to_string(r.h2.status)},
            {"evidence", r.h2.evidence},
            {"summary", r.summary()}};
  if (r.h2.modl_prime) j["modl_prime"] = r.h2.modl_prime;
  return j;
}

int cmd_slopes(const Config& cfg, long p, long q, const std::string& method_s, const std::vector<long>& scan) {
  H2Method method = parse_h2_method(method_s);
  const std::string head = "p,q,h1,p_mod_4,h2,modl_prime,evidence\n";
  if (!scan.empty()) {
    if (scan.size() != 2) throw UsageError("--scan takes PMAX QMAX");
    std::vector<Slope> slopes;
    for (long pp = 1; pp <= scan[0]; ++pp)
      for (long qq = -scan[1]; qq <= scan[1]; ++qq)
        if (qq != 0 && std::gcd(pp, qq) == 1) slopes.emplace_back(pp, qq);
    std::vector<SlopeReport> reps(slopes.size());
    parallel_for(static_cast<long>(slopes.size()), cfg.threads, [&](long i) {
      const Slope& s = slopes[static_cast<size_t>(i)];
      H2Method m = method;
      if (m == H2Method::ModL && odd_prime_factors(s.p).empty()) m = H2Method::Exact;
      reps[static_cast<size_t>(i)] = analyze_slope(s, m);
    });
    if (cfg.format == "json") {
      json j = header("slope-scan", cfg);
      json arr = json::array();
      for (const auto& r : reps) arr.push_back(slope_json(r));
      j["reports"] = arr;
      emit(cfg, j.dump(2) + "\n");
    } else {
      std::string out = head;
      for (const auto& r : reps) out += slope_csv_row(r);
      emit(cfg, out);
    }
    return kExitOk;
  }
  Slope s(p, q);
  SlopeReport r = analyze_slope(s, method);
  if (cfg.format == "json") {
    json j = header("slope", cfg);
    j["report"] = slope_json(r);
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, head + slope_csv_row(r));
  }
  if (!r.hypotheses_hold()) {
    std::cerr << r.summary() << "\n";
    return kExitHypothesis;
  }
  return kExitOk;
}

int cmd_transport(const Config& cfg, long npoints, double h, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uq(1.0 / 6 + 0.01, 1.0 / 3 - 0.01);
  std::bernoulli_distribution coin(0.5);
  struct Row {
    double p, q, r1, r2, neg;
  };
  std::vector<std::pair<double, bool>> samples;
  while (static_cast<long>(samples.size()) < npoints) {
    double q = uq(rng);
    bool flip = coin(rng);
    if (std::abs(q - 0.25) < 0.01) continue;
    samples.push_back({q, flip});
  }
  std::vector<Row> rows(samples.size());
  parallel_for(static_cast<long>(samples.size()), cfg.threads, [&](long i) {
    auto [qv, flip] = samples[static_cast<size_t>(i)];
    BigReal Q(qv), P = branch_p_of_q(Q);
    if (flip) P = -P;
    BigReal H(h);
    rows[static_cast<size_t>(i)] = {P.to_double(), qv, transport_residual(P, Q, H).to_double(),
                                    transport_residual(P, Q, H / 2).to_double(),
                                    transport_residual(P, Q, H, TransportVariant::NegativeControl).to_double()};
  });
  if (cfg.format == "json") {
    json j = header("transport", cfg);
    j["h"] = jdouble(h);
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"p", jdouble(r.p)}, {"q", jdouble(r.q)}, {"residual_h", jdouble(r.r1)}, {"residual_h2", jdouble(r.r2)},
                     {"ratio", jdouble(r.r1 / r.r2)}, {"negative_control", jdouble(r.neg)}});
    j["points"] = arr;
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out = "p,q,residual_h,residual_h2,ratio,negative_control\n";
    for (const auto& r : rows)
      out += dec_double(r.p) + "," + dec_double(r.q) + "," + dec_double(r.r1) + "," + dec_double(r.r2) + "," +
             dec_double(r.r1 / r.r2) + "," + dec_double(r.neg) + "\n";
    emit(cfg, out);
  }
  return kExitOk;
}

long default_precision() {
  const char* env = std::getenv("WRT_PRECISION");
  if (!env || !*env) return 192;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0') throw UsageError(std::string("WRT_PRECISION is not an integer: ") + env);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotics of WRT invariants of figure-eight surgeries"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  try {
    cfg.precision = default_precision();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  app.add_option("--precision", cfg.precision, "working precision in bits (default 192 or $WRT_PRECISION)");
  app.add_option("--kmin", cfg.kmin, "smallest level");
  app.add_option("--kmax", cfg.kmax, "largest level");
  app.add_option("--kstep", cfg.kstep, "level step");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "worker threads");

  std::string knot = "figure-eight";
  long k = 0, l = 0, symbolic = 0, p = 1, q = 0;
  bool p_set = false;

  auto* jones = app.add_subcommand("jones", "colored Jones values at t_k or symbolic polynomials");
  jones->add_option("--knot", knot);
  jones->add_option("--k", k, "level for a full table");
  jones->add_option("--l", l, "color for a series over the k range");
  jones->add_option("--symbolic", symbolic, "print the Laurent polynomial of this color");

  auto* state = app.add_subcommand("state", "knot state coefficients");
  state->add_option("--knot", knot);
  state->add_option("--k", k)->required();

  auto add_slope = [&](CLI::App* sc, bool required) {
    auto* op = sc->add_option("--p", p, "slope numerator");
    auto* oq = sc->add_option("--q", q, "slope denominator");
    if (required) {
      op->required();
      oq->required();
    }
    op->each([&](const std::string&) { p_set = true; });
  };

  auto* wrt = app.add_subcommand("wrt", "WRT invariant of a Dehn filling over a k range");
  add_slope(wrt, true);
  wrt->add_option("--knot", knot);

  auto* charvar = app.add_subcommand("charvar", "intersection of a surgery line with the character variety");
  add_slope(charvar, true);

  auto* pred = app.add_subcommand("predict", "flat connection table of a filling");
  add_slope(pred, true);

  bool central = false, hikami = false;
  auto* ver = app.add_subcommand("verify", "least-squares fit of Z_k against the predicted atoms");
  add_slope(ver, true);
  ver->add_flag("--central", central, "fit central atoms instead of leaving them in the residual");
  ver->add_flag("--hikami", hikami, "fit the (1,1) filling against the published Sigma(2,3,7) data");

  std::string kind = "irreducible", qlist;
  auto* pw = app.add_subcommand("pointwise", "pointwise limits of the knot state");
  pw->add_option("--kind", kind, "irreducible or abelian");
  pw->add_option("--q", qlist, "comma-separated q values");

  std::vector<std::string> points;
  auto* ms = app.add_subcommand("microsupport", "decay of the knot state off the character variety");
  ms->add_option("--point", points, "P,Q (repeatable)");

  std::string method = "auto";
  std::vector<long> scan;
  auto* sl = app.add_subcommand("slopes", "certify the hypotheses H'1 and H'2 for surgery slopes");
  add_slope(sl, false);
  sl->add_option("--method", method, "auto, slope-bound, discriminant, modl or exact");
  sl->add_option("--scan", scan, "PMAX QMAX")->expected(2);

  long npoints = 50;
  double h = 1e-5;
  unsigned long seed = 1;
  auto* tr = app.add_subcommand("transport-check", "finite-difference check of the transport equation");
  tr->add_option("--points", npoints);
  tr->add_option("--step", h, "finite-difference step");
  tr->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  bool explicit_k = app.count("--kmin") || app.count("--kmax") || app.count("--kstep");
  if (ms->parsed() && !explicit_k) {
    cfg.kmin = 20;
    cfg.kmax = 200;
    cfg.kstep = 10;
  }

  try {
    cfg.validate();
    PrecisionScope scope(cfg.precision);
    if (jones->parsed()) return cmd_jones(cfg, knot, k, l, symbolic);
    if (state->parsed()) return cmd_state(cfg, knot, k);
    if (wrt->parsed()) return cmd_wrt(cfg, knot, p, q);
    if (charvar->parsed()) return cmd_charvar(cfg, p, q);
    if (pred->parsed()) {
      if (cfg.format == "csv" && !app.count("--format")) cfg.format = "json";
      return cmd_predict(cfg, p, q);
    }
    if (ver->parsed()) {
      if (!app.count("--format")) cfg.format = "json";
      return cmd_verify(cfg, p, q, central, hikami);
    }
    if (pw->parsed()) return cmd_pointwise(cfg, kind, qlist);
    if (ms->parsed()) return cmd_microsupport(cfg, points);
    if (sl->parsed()) {
      if (scan.empty() && !p_set) throw UsageError("slopes needs --p P --q Q or --scan PMAX QMAX");
      return cmd_slopes(cfg, p, q, method, scan);
    }
    if (tr->parsed()) return cmd_transport(cfg, npoints, h, seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
