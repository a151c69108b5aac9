// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "htype/classifier.hpp"
#include "htype/cli.hpp"
#include "htype/constructions.hpp"
#include "htype/io.hpp"
#include "htype/j_calculus.hpp"

using namespace htype;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

std::vector<std::pair<std::string, MetricLieAlgebra>> fixtures() {
  Matrix weighted = Matrix::Identity(3, 3);
  weighted(2, 2) = 4.0;
  return {
      {"h_C(1)", heisenberg_complex(1).algebra},
      {"h_C(2)", heisenberg_complex(2).algebra},
      {"h_C(3)", heisenberg_complex(3).algebra},
      {"h_R(1)", heisenberg_real(1)},
      {"h_R(3)", heisenberg_real(3)},
      {"clifford(3,4)", from_clifford_representation(standard_clifford_generators(3, 4))},
      {"clifford(7,8)", from_clifford_representation(standard_clifford_generators(7, 8))},
      {"scrambled h_C(2)", scramble(heisenberg_complex(2), 42).value.algebra},
      {"h_C(1)+h_C(1)", direct_sum(heisenberg_complex(1), heisenberg_complex(1)).algebra},
      {"h_R(1)+R", direct_sum({heisenberg_real(1), std::nullopt}, {abelian(1), std::nullopt}).algebra},
      {"weighted h_R(1)", MetricLieAlgebra(3, {{0, 1, 2, 1.0}}, weighted)},
  };
}

Outcome positive_classification() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto h = heisenberg_complex(n);
    const Classification c = classify(h.algebra, h.complex);
    o.require(c.result.has_value(), "n=" + std::to_string(n) + " not classified");
    if (!c.result) continue;
    o.require(c.result->n == n, "n=" + std::to_string(n) + " recovered as " + std::to_string(c.result->n));
    worst = std::max(worst, c.result->residuals.max());
  }
  const double elapsed = seconds_since(start);
  o.require(worst < 1e-12, "residual " + fmt(worst));
  o.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max residual " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome hidden_basis_round_trip() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0, worst_independent = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = scramble(heisenberg_complex(n), seed).value;
      const Classification c = classify(s.algebra, s.complex, kDerivedTolerance);
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      o.require(c.result.has_value(), tag + " not classified");
      if (!c.result) continue;
      o.require(c.result->n == n, tag + " wrong n");
      worst = std::max(worst, c.result->residuals.max());
      for (const Defect& d : verify_isomorphism(s.algebra, *s.complex, *c.result, kDerivedTolerance)) {
        worst_independent = std::max(worst_independent, d.magnitude);
      }
    }
  }
  const double elapsed = seconds_since(start);
  o.require(worst < 1e-8, "residual " + fmt(worst));
  o.require(worst_independent < 1e-8, "independent residual " + fmt(worst_independent));
  o.require(elapsed < 10.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "60 inputs, max residual " + fmt(std::max(worst, worst_independent)) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome center_dimension_obstruction() {
  Outcome o;
  const auto sum = direct_sum(heisenberg_complex(1), heisenberg_complex(1));
  const HTypeVerdict v = verify_h_type(sum.algebra);
  o.require(v.status == VerdictStatus::not_h_type, "verdict " + std::string(to_string(v.status)));
  const ObstructionWitness w = find_obstruction(sum.algebra, *sum.complex);
  const MetricLieAlgebra& a = sum.algebra;
  const Vector iz = sum.complex->matrix * w.z;
  o.require(std::abs(a.norm(w.z) - 1.0) < 1e-10 && std::abs(a.norm(w.w) - 1.0) < 1e-10, "witness not unit");
  o.require(std::abs(a.inner(w.z, w.w)) < 1e-10, "<z,w> = " + fmt(a.inner(w.z, w.w)));
  o.require(std::abs(a.inner(iz, w.w)) < 1e-10, "<iz,w> = " + fmt(a.inner(iz, w.w)));
  const JCalculus calc(a);
  const double product = (calc.compute_j(w.z).action() * calc.compute_j(w.w).action()).norm();
  o.require(product < 1e-10, "|J_z J_w| = " + fmt(product));
  if (o.pass) o.detail = "|J_z J_w| = " + fmt(product);
  return o;
}

Outcome clifford_identity() {
  Outcome o;
  std::vector<MetricLieAlgebra> inputs{heisenberg_complex(1).algebra, heisenberg_complex(2).algebra,
                                       heisenberg_complex(3).algebra,
                                       from_clifford_representation(standard_clifford_generators(3, 4))};
  double worst = 0.0, worst_square = 0.0;
  std::mt19937_64 rng(3);
  for (const auto& a : inputs) {
    const JCalculus calc(a);
    const Matrix& c = calc.splitting().center.basis;
    for (int p = 0; p < c.cols(); ++p)
      for (int q = 0; q < c.cols(); ++q) worst = std::max(worst, calc.clifford_defect(c.col(p), c.col(q)));
    for (int s = 0; s < 100; ++s) {
      const Matrix j = calc.compute_j(calc.random_unit_central(rng)).action();
      worst_square = std::max(worst_square, (j * j + Matrix::Identity(j.rows(), j.cols())).norm());
    }
  }
  o.require(worst < 1e-12, "clifford defect " + fmt(worst));
  o.require(worst_square < 1e-12, "|J_z^2 + I| = " + fmt(worst_square));
  if (o.pass) o.detail = "max defect " + fmt(std::max(worst, worst_square));
  return o;
}

Outcome conjugate_linearity() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 3; ++n) {
    const auto h = heisenberg_complex(n);
    const JCalculus calc(h.algebra);
    for (int s = 0; s < 100; ++s) {
      const auto d = calc.conjugate_linearity_defect(*h.complex, calc.random_unit_central(rng));
      worst = std::max({worst, d.z_linearity, d.u_antilinearity});
    }
  }
  o.require(worst < 1e-12, "defect " + fmt(worst));
  if (o.pass) o.detail = "max defect " + fmt(worst);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (const auto& [name, a] : fixtures()) {
    const JCalculus calc(a);
    for (int s = 0; s < 100; ++s) {
      const Vector z = scale(rng) * calc.random_unit_central(rng);
      const double d = (calc.compute_j(z).matrix - calc.j_bilinear_form(z)).norm();
      if (d > worst) worst = d;
      o.require(d < 1e-10, name + " disagrees by " + fmt(d));
    }
  }
  if (o.pass) o.detail = "max disagreement " + fmt(worst);
  return o;
}

Outcome sphere_sampling() {
  Outcome o;
  const double tol = kDefaultTolerance;
  std::mt19937_64 rng(31);
  int checked = 0;
  for (const auto& [name, a] : fixtures()) {
    const JCalculus calc(a, tol);
    const bool polarized_pass = calc.polarized_isometry_defect() <= tol;
    bool sampled_pass = true;
    for (int s = 0; s < 1000; ++s) {
      if (calc.isometry_defect(calc.random_unit_central(rng)) > tol) sampled_pass = false;
    }
    o.require(polarized_pass == sampled_pass, name + ": polarized " + (polarized_pass ? "pass" : "fail") +
                                                  ", sampled " + (sampled_pass ? "pass" : "fail"));
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " fixtures, no disagreements";
  return o;
}

Outcome clifford_correspondence() {
  Outcome o;
  double worst = 0.0, worst_round_trip = 0.0;
  for (auto [d, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {3, 4}}) {
    const auto a = from_clifford_representation(standard_clifford_generators(d, m));
    const HTypeVerdict v = verify_h_type(a);
    const std::string tag = "d=" + std::to_string(d) + " m=" + std::to_string(m);
    o.require(v.status == VerdictStatus::h_type, tag + " not H-type");
    worst = std::max({worst, v.bracket_containment_defect, v.polarized_isometry_defect});

    const JCalculus calc(a);
    CliffordGenerators back{d, m, {}};
    for (int c = 0; c < d; ++c) {
      back.generators.push_back(calc.compute_j(Vector::Unit(m + d, m + c)).ambient().topLeftCorner(m, m));
    }
    const MetricLieAlgebra rebuilt = from_clifford_representation(back, std::nullopt, std::nullopt, 1e-9);
    for (int p = 0; p < m + d; ++p)
      for (int q = p + 1; q < m + d; ++q) {
        const Vector ep = Vector::Unit(m + d, p), eq = Vector::Unit(m + d, q);
        worst_round_trip = std::max(worst_round_trip, (a.bracket(ep, eq) - rebuilt.bracket(ep, eq)).cwiseAbs().maxCoeff());
      }
  }
  o.require(worst < 1e-12, "verifier defect " + fmt(worst));
  o.require(worst_round_trip < 1e-12, "round trip " + fmt(worst_round_trip));
  if (o.pass) o.detail = "max defect " + fmt(std::max(worst, worst_round_trip));
  return o;
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "htype");
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

Outcome cli_contract() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("htype-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };

  o.require(cli({"generate", "heisenberg-complex", "--n", "2", "-o", p("h.json")}) == 0, "generate failed");
  std::string first, second;
  o.require(cli({"classify", p("h.json"), "--json", "-o", p("cert.json")}, &first) == 0, "classify did not exit 0");
  o.require(cli({"classify", p("h.json"), "--json"}, &second) == 0, "second classify did not exit 0");
  o.require(!first.empty() && first == second, "--json output not byte-stable");
  o.require(cli({"check-certificate", p("h.json"), p("cert.json")}) == 0, "check-certificate did not exit 0");

  o.require(cli({"generate", "heisenberg-complex", "--n", "1", "-o", p("h1.json")}) == 0, "generate failed");
  o.require(cli({"generate", "direct-sum", p("h1.json"), p("h1.json"), "-o", p("sum.json")}) == 0,
            "direct-sum failed");
  o.require(cli({"classify", p("sum.json")}) == 1, "negative pipeline did not exit 1");
  fs::remove_all(dir);
  if (o.pass) o.detail = "exit codes 0 and 1, stable JSON";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"positive classification", positive_classification},
      {"hidden-basis round trip", hidden_basis_round_trip},
      {"center-dimension obstruction", center_dimension_obstruction},
      {"Clifford identity", clifford_identity},
      {"conjugate linearity", conjugate_linearity},
      {"oracle equivalence", oracle_equivalence},
      {"sphere sampling vs polarization", sphere_sampling},
      {"Clifford correspondence", clifford_correspondence},
      {"CLI contract", cli_contract},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (k + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ": "
              << o.detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
