#include "commands.hpp"

#include "berezin/error.hpp"
#include "berezin/hls.hpp"
#include "berezin/kernel.hpp"
#include "berezin/matgroup.hpp"
#include "berezin/ospos.hpp"
#include "berezin/rspace.hpp"
#include "berezin/tables.hpp"
#include "berezin/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

namespace cli {

using berezin::Error;
using berezin::ErrorCode;
using berezin::matgroup::Matrix;
using berezin::rspace::FamilyKind;
using berezin::rspace::FamilySpec;
using berezin::rspace::OrbitLabel;
namespace kernel = berezin::kernel;
namespace rspace = berezin::rspace;
namespace matgroup = berezin::matgroup;

namespace {

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const OrbitLabel& l) { return {{"j", l.j}, {"plus", l.plus}, {"minus", l.minus}}; }

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

FamilySpec family_of(const Settings& s) {
  const std::string name = s.text("family");
  if (name == "grassmann") return FamilySpec::grassmann(s.integer32("p"), s.integer32("q"));
  return FamilySpec::from_name(name, s.integer32("n"));
}

bool riemannian_wallach_orbit(const OrbitLabel& l) { return l.j == 0; }

bool non_riemannian(const FamilySpec& f, const OrbitLabel& l) {
  if (f.kind == FamilyKind::Ball) return l.j == 1;
  if (f.kind == FamilyKind::Siegel) return l.j > 0 && l.j < f.rank_r;
  return false;
}

// Prediction from the positivity theory: true / false / unknown.
json predicted_psd(const FamilySpec& f, const OrbitLabel& l, double e) {
  if (e == 0.0) return true;
  if (non_riemannian(f, l)) return false;
  if (!riemannian_wallach_orbit(l)) return nullptr;
  try {
    return kernel::wallach_membership(f, e);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::MissingConfig || err.code() == ErrorCode::UnsupportedFamily) return nullptr;
    throw;
  }
}

double seg_bump(double x, double c, double r) {
  const double t = (x - c) / r;
  return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
}

Outcome spectrum(const Settings& s) {
  using namespace berezin::transforms;
  const int n = s.integer32("sphere");
  const double rho = 0.5 * (n + 1);
  if (s.given("e") == s.given("lambda")) throw UsageError("spectrum: give exactly one of --e and --lambda");
  const double lambda = s.given("lambda") ? s.number("lambda") : rho + s.number("e");
  const SphereGrid grid = n == 1 ? SphereGrid::circle(s.integer32("nodes"))
                                 : SphereGrid::sphere2(s.integer32("n-theta"), s.integer32("n-phi"));
  const double tol = s.given("tol") ? s.number("tol") : (n == 1 ? 1e-6 : 1e-5);
  const auto entries = measure_spectrum(lambda, grid, s.integer32("m-max"), s.number("margin"));

  Outcome o;
  o.fields["sphere"] = n;
  o.fields["lambda"] = lambda;
  o.fields["lambda_minus_rho"] = lambda - rho;
  o.fields["grid"] = n == 1 ? json{{"nodes", grid.size()}}
                            : json{{"n_theta", grid.n_theta()}, {"n_phi", grid.n_phi()}};
  json rows = json::array();
  double worst = 0.0;
  for (const SpectrumEntry& e : entries) {
    json r = {{"m", e.m}, {"analytic", optional_number(e.analytic)}, {"measured", optional_number(e.measured)}};
    if (!e.pole()) {
      const double err = std::abs(*e.analytic - *e.measured);
      worst = std::max(worst, err);
      r["abs_error"] = err;
    } else {
      r["abs_error"] = nullptr;
    }
    r["pole"] = e.pole();
    rows.push_back(std::move(r));
  }
  o.fields["entries"] = std::move(rows);
  o.fields["max_abs_error"] = worst;
  o.fields["tol"] = tol;
  o.contracts.emplace_back("measured eigenvalues match the Gamma-ratio formula", worst <= tol);
  return o;
}

Outcome gram(const Settings& s) {
  const FamilySpec fam = family_of(s);
  const double e = s.number("e");
  const OrbitLabel label = rspace::make_label(fam, s.integer32("orbit"));
  const auto pts = rspace::sample_orbit_coords(fam, label, s.integer32("points"),
                                               static_cast<std::uint64_t>(s.integer("seed")), s.number("margin"));
  const kernel::GramReport g = kernel::gram({fam, e}, pts, s.number("tol"));
  Outcome o;
  o.fields["family"] = fam.name();
  o.fields["lambda_minus_rho"] = e;
  o.fields["orbit"] = to_json(label);
  o.fields["n_points"] = g.size;
  o.fields["eigenvalues"] = to_json(g.eigenvalues);
  o.fields["min_eig"] = g.min_eig;
  o.fields["max_eig"] = g.max_eig;
  o.fields["psd"] = g.psd;
  o.fields["tol"] = g.tol_used;
  o.fields["witness"] = g.witness ? to_json(*g.witness) : json(nullptr);
  o.fields["witness_value"] = optional_number(g.witness_value);
  const json predicted = predicted_psd(fam, label, e);
  o.fields["predicted_psd"] = predicted;
  // Positivity is guaranteed for every finite sample; failure of positivity
  // only shows up once the sample is rich enough, so only that side is asserted.
  if (predicted.is_boolean() && predicted.get<bool>()) {
    o.contracts.emplace_back("Gram matrix is psd inside the Wallach set", g.psd);
  }
  return o;
}

Outcome wallach_scan(const Settings& s) {
  const FamilySpec fam = family_of(s);
  const OrbitLabel label = rspace::make_label(fam, s.integer32("orbit"));
  kernel::ThresholdOptions opt;
  opt.scan_lo = s.number("scan-lo");
  opt.scan_hi = s.number("scan-hi");
  opt.coarse_steps = s.integer32("steps");
  opt.width = s.number("width");
  opt.samples = s.integer32("samples");
  opt.seed = static_cast<std::uint64_t>(s.integer("seed"));
  opt.tol = s.number("tol");
  opt.margin = s.number("margin");
  const kernel::ThresholdResult t = kernel::estimate_positivity_threshold(fam, label, opt);

  auto points = [](const std::vector<kernel::ScanPoint>& v) {
    json a = json::array();
    for (const kernel::ScanPoint& p : v) {
      a.push_back({{"lambda_minus_rho", p.lambda_minus_rho}, {"min_eig", p.min_eig}, {"psd", p.psd}});
    }
    return a;
  };
  Outcome o;
  o.fields["family"] = fam.name();
  o.fields["orbit"] = to_json(label);
  o.fields["n_points"] = opt.samples;
  o.fields["lower"] = t.lower;
  o.fields["upper"] = t.upper;
  o.fields["endpoint_in_range"] = t.endpoint_in_range;
  o.fields["scan"] = points(t.scan);
  o.fields["discrete"] = points(t.discrete);

  json expected = nullptr;
  if (label.j == 0 && fam.kind == FamilyKind::Ball) expected = 0.0;
  if (label.j == 0 && fam.kind == FamilyKind::Siegel && fam.wallach_c) expected = -(fam.rank_r - 1) * *fam.wallach_c;
  o.fields["expected_endpoint"] = expected;
  if (expected.is_number()) {
    const double x = expected.get<double>();
    if (x >= opt.scan_lo && x <= opt.scan_hi) {
      const bool bracket = t.endpoint_in_range && std::abs(t.lower - x) <= 0.02 && std::abs(t.upper - x) <= 0.02;
      o.contracts.emplace_back("threshold brackets the Wallach endpoint within 0.02", bracket);
    }
    bool discrete = true;
    for (const kernel::ScanPoint& p : t.discrete) discrete = discrete && p.psd;
    o.contracts.emplace_back("discrete Wallach points are psd", discrete);
  }
  return o;
}

Outcome witness(const Settings& s) {
  const FamilySpec fam = family_of(s);
  const double e = s.number("e");
  Outcome o;
  o.fields["family"] = fam.name();
  o.fields["lambda_minus_rho"] = e;
  if (e == 0.0) {
    o.fields["witness"] = nullptr;
    o.fields["note"] = "the kernel is constant at lambda - rho = 0, so no witness exists";
    return o;
  }
  try {
    const kernel::Witness w = kernel::nonriemannian_witness(fam, e);
    o.fields["witness"] = {{"x", to_json(w.x)},
                           {"y", to_json(w.y)},
                           {"radius", w.radius},
                           {"form_value", w.form_value},
                           {"orbit", to_json(w.orbit)}};
    o.contracts.emplace_back("two-point form is negative on the non-Riemannian orbit", w.form_value < 0.0);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NoWitnessFound) throw;
    o.fields["witness"] = nullptr;
    o.fields["note"] = err.what();
    o.contracts.emplace_back("two-point form is negative on the non-Riemannian orbit", false);
  }
  return o;
}

Outcome orbits(const Settings& s) {
  const int p = s.integer32("p");
  const int q = s.integer32("q");
  if (p > q) throw UsageError("orbits: need p <= q");
  matgroup::Rng rng(static_cast<std::uint64_t>(s.integer("seed")));
  std::normal_distribution<double> nd;
  std::map<int, std::pair<OrbitLabel, int>> seen;
  std::vector<rspace::FlagPoint> interior;
  int degenerate = 0;
  const int samples = s.integer32("samples");
  for (int k = 0; k < samples; ++k) {
    Matrix m(p + q, p);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = nd(rng);
    const rspace::FlagPoint b = rspace::FlagPoint::from_spanning(m);
    try {
      const OrbitLabel l = rspace::classify_orbit(b, p, q);
      auto [it, fresh] = seen.try_emplace(l.j, l, 0);
      ++it->second.second;
      if (rspace::orbit_gap(b, p, q) > 0.1) interior.push_back(b);
    } catch (const Error&) {
      ++degenerate;
    }
  }
  const int moves = s.integer32("moves");
  int move_failures = 0;
  for (int k = 0; k < moves && !interior.empty(); ++k) {
    const rspace::FlagPoint& b = interior[static_cast<std::size_t>(k) % interior.size()];
    const auto h = matgroup::random_h(matgroup::GroupFamily::SL, p, q, rng, 0.7);
    if (rspace::classify_orbit(b.moved(h), p, q).j != rspace::classify_orbit(b, p, q).j) ++move_failures;
  }
  double fix = 0.0;
  const int stab = s.integer32("stabilizers");
  for (int j = 0; j <= p; ++j) {
    const rspace::FlagPoint bj = rspace::base_point(p, q, j);
    for (int k = 0; k < stab; ++k) {
      const auto h = rspace::random_stabilizer(p, q, j, rng);
      fix = std::max(fix, (bj.moved(h).projector() - bj.projector()).cwiseAbs().maxCoeff());
    }
  }
  Outcome o;
  o.fields["p"] = p;
  o.fields["q"] = q;
  o.fields["samples"] = samples;
  o.fields["degenerate"] = degenerate;
  json labels = json::array();
  for (const auto& [j, entry] : seen) {
    json l = to_json(entry.first);
    l["count"] = entry.second;
    labels.push_back(std::move(l));
  }
  o.fields["labels"] = std::move(labels);
  o.fields["expected_labels"] = p + 1;
  o.fields["moves"] = interior.empty() ? 0 : moves;
  o.fields["move_failures"] = move_failures;
  o.fields["stabilizer_checks"] = stab * (p + 1);
  o.fields["max_stabilizer_defect"] = fix;
  o.contracts.emplace_back("exactly p + 1 open orbits are found", static_cast<int>(seen.size()) == p + 1);
  o.contracts.emplace_back("labels are invariant under H", move_failures == 0);
  o.contracts.emplace_back("stabilizers fix the base points", fix <= 1e-12);
  return o;
}

Outcome quotient(const Settings& s) {
  const FamilySpec fam = family_of(s);
  const double e = s.number("e");
  const OrbitLabel label = rspace::make_label(fam, s.integer32("orbit"));
  const auto pts = rspace::sample_orbit_coords(fam, label, s.integer32("points"),
                                               static_cast<std::uint64_t>(s.integer("seed")), s.number("margin"));
  Outcome o;
  o.fields["family"] = fam.name();
  o.fields["lambda_minus_rho"] = e;
  o.fields["orbit"] = to_json(label);
  o.fields["n_points"] = static_cast<int>(pts.size());
  o.fields["tol"] = s.number("tol");
  const json predicted = predicted_psd(fam, label, e);
  try {
    const berezin::ospos::HilbertQuotient q = berezin::ospos::gns_quotient(pts, {fam, e}, s.number("tol"));
    matgroup::Rng rng(static_cast<std::uint64_t>(s.integer("seed")) + 1u);
    json defects = json::array();
    double worst = 0.0;
    for (int k = 0; k < s.integer32("h-samples"); ++k) {
      const auto h = matgroup::random_h(fam.group(), fam.p, fam.q, rng);
      const double d = berezin::ospos::invariance_check(q, h);
      worst = std::max(worst, d);
      defects.push_back({{"sample", k}, {"defect", d}});
    }
    o.fields["positive"] = true;
    o.fields["rank"] = q.rank();
    o.fields["kept_eigs"] = to_json(q.kept_eigenvalues());
    o.fields["defect_reports"] = std::move(defects);
    o.fields["max_defect"] = worst;
    o.contracts.emplace_back("H-invariance defect <= 1e-8", worst <= 1e-8);
    if (e == 0.0) o.contracts.emplace_back("rank one at lambda - rho = 0", q.rank() == 1);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotPositive) throw;
    o.fields["positive"] = false;
    o.fields["rank"] = 0;
    o.fields["kept_eigs"] = json::array();
    o.fields["defect_reports"] = json::array();
    o.fields["max_defect"] = nullptr;
    o.fields["note"] = err.what();
  }
  o.fields["predicted_positive"] = predicted;
  if (predicted.is_boolean() && predicted.get<bool>()) {
    o.contracts.emplace_back("form is positive inside the Wallach set", o.fields["positive"].get<bool>());
  }
  return o;
}

Outcome hls_suite(const Settings& s) {
  using namespace berezin::hls;
  const int n = s.integer32("n");
  const double lambda = s.number("lambda");
  const HLSParams P = HLSParams::make(n, lambda);
  Outcome o;
  o.fields["n"] = n;
  o.fields["lambda"] = lambda;
  o.fields["p"] = P.p;
  o.fields["sharp_constant"] = sharp_constant(n, lambda);

  json rows = json::array();
  if (n == 1) {
    std::vector<double> spacings = s.numbers("spacings");
    std::sort(spacings.begin(), spacings.end(), std::greater<>());
    bool below = true;
    bool decreasing = true;
    double last = 1.0;
    for (double h : spacings) {
      const OptimizerRayleigh r = optimizer_rayleigh(lambda, s.number("half-width"), h);
      rows.push_back({{"spacing", r.spacing},
                      {"half_width", r.half_width},
                      {"quotient", r.quotient},
                      {"sharp", r.sharp},
                      {"relative_gap", r.relative_gap}});
      below = below && r.quotient < r.sharp;
      decreasing = decreasing && r.relative_gap <= last;
      last = r.relative_gap;
    }
    o.contracts.emplace_back("optimizer quotient stays below the sharp constant", below);
    o.contracts.emplace_back("optimizer quotient approaches the sharp constant under refinement", decreasing);
  }
  o.fields["rayleigh"] = std::move(rows);

  const int cells = s.given("cells") || n == 1 ? s.integer32("cells") : 16;
  const double h = 4.0 / cells;
  auto grid = [&] {
    return n == 1 ? GridFunction::line(-2.0 + 0.5 * h, h, cells)
                  : GridFunction::plane({-2.0 + 0.5 * h, -2.0 + 0.5 * h}, h, {cells, cells});
  };
  std::mt19937_64 rng(static_cast<std::uint64_t>(s.integer("seed")));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto profile = [&](double c1, double c2, double r, double w, bool left) {
    const double cy = 1.2 * u(rng) - 0.6;
    return [=](double x, double y) {
      if (left && x >= 0.0) return 0.0;
      const double ey = n == 1 ? 1.0 : seg_bump(y, cy, 1.2);
      return (seg_bump(x, c1, r) + w * seg_bump(x, c2, r)) * ey;
    };
  };

  const int rp_checks = s.integer32("reflection-checks");
  int rp_pass = 0;
  double min_ratio = 0.0;
  for (int k = 0; k < rp_checks; ++k) {
    const double c1 = -1.8 * u(rng), c2 = -1.8 * u(rng), r = 0.05 + 0.5 * u(rng), w = 2 * u(rng) - 1;
    GridFunction f = grid();
    f.sample(profile(c1, c2, r, w, true));
    const double v = reflection_positivity_check(f, lambda, {0, 0.0});
    const double scale = i_lambda(f, f, lambda);
    if (scale > 0.0) min_ratio = std::min(min_ratio, v / scale);
    if (v >= -1e-8 * scale) ++rp_pass;
  }
  o.fields["reflection"] = {{"checks", rp_checks}, {"passed", rp_pass}, {"min_ratio", min_ratio}};

  const int ea_checks = s.integer32("even-checks");
  int ea_hold = 0;
  double even_defect = 0.0;
  double identity_defect = 0.0;
  for (int k = 0; k < ea_checks; ++k) {
    const double c1 = 3.6 * u(rng) - 1.8, c2 = 3.6 * u(rng) - 1.8, r = 0.05 + 0.4 * u(rng), w = 2 * u(rng) - 1;
    GridFunction f = grid();
    f.sample(profile(c1, c2, r, w, false));
    const EvenAverageResult res = even_average_inequality(f, lambda, {0, 0.0});
    if (res.holds) ++ea_hold;
    identity_defect = std::max(identity_defect, std::abs((res.lhs - res.rhs) - res.odd_form) / std::max(1.0, res.rhs));
    const GridFunction e = reflect(f, {0, 0.0});
    const GridFunction even = f.with_values(0.5 * (f.values() + e.values()));
    const EvenAverageResult er = even_average_inequality(even, lambda, {0, 0.0});
    if (er.rhs > 0.0) even_defect = std::max(even_defect, std::abs(er.lhs - er.rhs) / er.rhs);
  }
  o.fields["even_average"] = {{"checks", ea_checks},
                              {"holds", ea_hold},
                              {"max_even_defect", even_defect},
                              {"max_identity_defect", identity_defect}};
  o.contracts.emplace_back("reflection positivity >= -1e-8 I[f,f]", rp_pass == rp_checks);
  o.contracts.emplace_back("even-average inequality holds", ea_hold == ea_checks);
  o.contracts.emplace_back("equality for even f to 1e-10", even_defect <= 1e-10);
  return o;
}

Outcome decomp_check(const Settings& s) {
  const bool sp = s.text("group") == "sp";
  const int p = sp ? s.integer32("n") : s.integer32("p");
  const int q = sp ? s.integer32("n") : s.integer32("q");
  matgroup::Rng rng(static_cast<std::uint64_t>(s.integer("seed")));
  const int samples = s.integer32("samples");
  int skipped = 0;
  double reassembly = 0.0, det = 0.0, invol = 0.0;
  for (int k = 0; k < samples; ++k) {
    const matgroup::GroupElement g = sp ? matgroup::random_sp(p, rng) : matgroup::random_sl(p, q, rng);
    const double scale = g.matrix().norm();
    for (auto w : {matgroup::Involution::Theta, matgroup::Involution::Tau, matgroup::Involution::TauTilde}) {
      const Matrix back = matgroup::apply_involution(matgroup::apply_involution(g, w), w).matrix();
      invol = std::max(invol, (back - g.matrix()).norm() / scale);
    }
    try {
      const matgroup::BlockTriangularParts parts = matgroup::nbar_man_decompose(g);
      reassembly = std::max(reassembly, (parts.reassemble() - g.matrix()).norm() / scale);
      det = std::max(det, std::abs(parts.A.determinant() * parts.D.determinant() - 1.0));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::OutsideOpenCell) throw;
      ++skipped;
    }
  }
  Outcome o;
  o.fields["group"] = sp ? "sp" : "sl";
  o.fields["p"] = p;
  o.fields["q"] = q;
  o.fields["samples"] = samples;
  o.fields["skipped"] = skipped;
  o.fields["max_reassembly_error"] = reassembly;
  o.fields["max_det_defect"] = det;
  o.fields["max_involution_defect"] = invol;
  o.contracts.emplace_back("Nbar M A N factors reassemble g", reassembly <= 1e-9);
  o.contracts.emplace_back("det(A) det(D) = 1", det <= 1e-9);
  o.contracts.emplace_back("involutions square to the identity", invol <= 1e-12);
  return o;
}

Outcome tables(const Settings& s) {
  namespace tb = berezin::tables;
  std::vector<const tb::TableRecord*> rows;
  if (s.flag("all")) {
    for (const tb::TableRecord& r : tb::all_rows()) rows.push_back(&r);
  } else if (s.given("row")) {
    rows.push_back(&tb::table_row(s.text("row")));
  } else {
    throw UsageError("tables: give --row or --all");
  }
  auto tab = [](const tb::TabularRow& r) { return json{{"row", r.row}, {"cells", r.cells}}; };
  json out = json::array();
  for (const tb::TableRecord* r : rows) {
    json flags = json::array();
    if (r->corrupted) flags.push_back(std::string(berezin::to_string(ErrorCode::CorruptedEntry)));
    out.push_back({{"key", r->key},
                   {"label", r->label},
                   {"classification_table", r->classification_table},
                   {"classification", tab(r->classification)},
                   {"complementary_series", tab(r->complementary_series)},
                   {"corrupted", r->corrupted},
                   {"flags", std::move(flags)}});
  }
  Outcome o;
  o.fields["rows"] = std::move(out);
  return o;
}

std::string num(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_string()) return v.get<std::string>();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Header and one line per element of report[key], taking the given columns.
std::string table_csv(const json& report, const std::string& key, const std::vector<std::string>& cols,
                      const std::map<std::string, std::string>& fixed = {}) {
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  if (!report.contains(key) || !report[key].is_array()) return os.str();
  for (const json& row : report[key]) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "");
      if (auto f = fixed.find(cols[i]); f != fixed.end()) {
        os << f->second;
      } else if (row.is_object() && row.contains(cols[i])) {
        os << num(row[cols[i]]);
      } else if (!row.is_object() && i + 1 == cols.size()) {
        os << num(row);
      }
    }
    os << "\n";
  }
  return os.str();
}

json indexed(const json& values) {
  json a = json::array();
  if (!values.is_array()) return a;
  for (std::size_t i = 0; i < values.size(); ++i) a.push_back({{"index", i}, {"value", values[i]}});
  return a;
}

}  // namespace

Outcome run(const Settings& s) {
  const std::string& name = s.cmd().name;
  if (name == "spectrum") return spectrum(s);
  if (name == "gram") return gram(s);
  if (name == "wallach-scan") return wallach_scan(s);
  if (name == "witness") return witness(s);
  if (name == "orbits") return orbits(s);
  if (name == "quotient") return quotient(s);
  if (name == "hls") return hls_suite(s);
  if (name == "decomp-check") return decomp_check(s);
  if (name == "tables") return tables(s);
  throw UsageError("subcommand '" + name + "' does not produce a report");
}

bool contracts_held(const Outcome& o) {
  return std::all_of(o.contracts.begin(), o.contracts.end(), [](const auto& c) { return c.second; });
}

json assemble(const Settings& s, const Outcome& o) {
  json r = json::object();
  r["subcommand"] = s.cmd().name;
  r["seed"] = s.integer("seed");
  r["config"] = s.resolved();
  for (auto it = o.fields.begin(); it != o.fields.end(); ++it) r[it.key()] = it.value();
  json contracts = json::array();
  for (const auto& [what, held] : o.contracts) contracts.push_back({{"name", what}, {"held", held}});
  r["contracts"] = std::move(contracts);
  r["status"] = contracts_held(o) ? "ok" : "property_failed";
  return r;
}

std::string report_csv(const json& report, const std::string& kind) {
  if (kind == "spectrum") {
    const std::string lambda = report.contains("lambda") ? num(report["lambda"]) : "";
    return table_csv(report, "entries", {"m", "lambda", "analytic", "measured", "abs_error"}, {{"lambda", lambda}});
  }
  if (kind == "wallach-scan") return table_csv(report, "scan", {"lambda_minus_rho", "min_eig", "psd"});
  if (kind == "hls") return table_csv(report, "rayleigh", {"spacing", "half_width", "quotient", "sharp", "relative_gap"});
  if (kind == "gram") {
    json r = {{"rows", indexed(report.value("eigenvalues", json::array()))}};
    return table_csv(r, "rows", {"index", "value"});
  }
  if (kind == "quotient") {
    json r = {{"rows", indexed(report.value("kept_eigs", json::array()))}};
    return table_csv(r, "rows", {"index", "value"});
  }
  if (kind == "orbits") return table_csv(report, "labels", {"j", "plus", "minus", "count"});
  if (kind == "witness") {
    json r = {{"rows", json::array()}};
    if (report.contains("witness") && report["witness"].is_object()) {
      r["rows"].push_back({{"lambda_minus_rho", report["lambda_minus_rho"]},
                           {"radius", report["witness"]["radius"]},
                           {"form_value", report["witness"]["form_value"]}});
    }
    return table_csv(r, "rows", {"lambda_minus_rho", "radius", "form_value"});
  }
  if (kind == "decomp-check") {
    json r = {{"rows", json::array()}};
    if (report.contains("samples")) r["rows"].push_back(report);
    return table_csv(r, "rows",
                     {"samples", "skipped", "max_reassembly_error", "max_det_defect", "max_involution_defect"});
  }
  if (kind == "tables") {
    std::string out = "key,classification_table,corrupted\n";
    for (const json& row : report.value("rows", json::array())) {
      out += quoted(row.value("key", "")) + "," + row.value("classification_table", "") + "," +
             num(row.value("corrupted", false)) + "\n";
    }
    return out;
  }
  throw UsageError("no CSV layout for report kind '" + kind + "'");
}

}  // namespace cli
