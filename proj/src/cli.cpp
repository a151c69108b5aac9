#include "htype/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "htype/classifier.hpp"
#include "htype/constructions.hpp"
#include "htype/io.hpp"
#include "htype/j_calculus.hpp"

namespace htype {

namespace {

double resolve_tolerance(const std::optional<double>& flag, const Metadata& metadata) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HTYPE_TOL"); env != nullptr && *env != '\0') return default_tolerance();
  if (auto it = metadata.find("provenance"); it != metadata.end() && it->second == "scramble") {
    return kDerivedTolerance;
  }
  return kDefaultTolerance;
}

// Reads the metadata first, then validates at the resolved tolerance.
AlgebraDocument load_with_tolerance(const std::string& path, const std::optional<double>& flag, bool validate,
                                    double& tol) {
  AlgebraDocument raw = load_algebra(path, LoadOptions{false, kDefaultTolerance});
  tol = resolve_tolerance(flag, raw.metadata);
  if (validate) return load_algebra(path, LoadOptions{true, tol});
  return raw;
}

void print_verdict(std::ostream& out, const HTypeVerdict& v) {
  out << "status: " << to_string(v.status) << "\n"
      << "center_dim: " << v.center_dim << "\n"
      << "complement_dim: " << v.complement_dim << "\n"
      << "bracket_containment_defect: " << v.bracket_containment_defect << "\n"
      << "polarized_isometry_defect: " << v.polarized_isometry_defect << " (frobenius, dim v = " << v.complement_dim
      << ")\n";
  if (v.containment_witness) {
    out << "containment_witness: off-center norm " << v.containment_witness->off_center_norm << "\n";
  }
  if (v.isometry_witness) out << "isometry_witness: defect " << v.isometry_witness->defect << "\n";
}

int exit_for(const Classification& c) {
  switch (c.kind()) {
    case Classification::Kind::classification:
      return kExitOk;
    case Classification::Kind::obstruction:
      return kExitNegative;
    case Classification::Kind::verdict:
      return c.verdict.status == VerdictStatus::h_type ? kExitInputError : kExitNegative;
  }
  return kExitInputError;
}

int check_certificate(const std::string& algebra_path, const std::string& cert_path, std::optional<double> tol_flag,
                      std::ostream& out) {
  const CertificateDocument cert = load_certificate(cert_path);
  const double tol = tol_flag ? *tol_flag : cert.tolerance_used;
  const AlgebraDocument doc = load_algebra(algebra_path, LoadOptions{true, tol});
  const MetricLieAlgebra& alg = doc.value.algebra;

  bool ok = true;
  switch (cert.kind) {
    case Classification::Kind::classification: {
      if (!doc.value.complex) throw InputError("classification certificate needs an algebra with a complex structure");
      for (const Defect& r : verify_isomorphism(alg, *doc.value.complex, *cert.content.result, tol)) {
        const bool pass = r.magnitude <= tol;
        ok = ok && pass;
        out << r.name << "_residual: " << r.magnitude << (pass ? "" : "  (exceeds tolerance)") << "\n";
      }
      break;
    }
    case Classification::Kind::obstruction: {
      if (!doc.value.complex) throw InputError("obstruction certificate needs an algebra with a complex structure");
      const ObstructionWitness& w = *cert.content.obstruction;
      const JCalculus calc(alg, tol);
      const Vector iz = doc.value.complex->matrix * w.z;
      const double unit = std::max(std::abs(alg.norm(w.z) - 1.0), std::abs(alg.norm(w.w) - 1.0));
      const double orth = std::max(std::abs(alg.inner(w.z, w.w)), std::abs(alg.inner(iz, w.w)));
      const double product = (calc.compute_j(w.z).action() * calc.compute_j(w.w).action()).norm();
      out << "unit_defect: " << unit << "\n"
          << "complex_orthogonality_defect: " << orth << "\n"
          << "product_norm: " << product << "\n";
      ok = unit <= tol && orth <= tol;
      if (w.kind == ObstructionKind::center_dim) ok = ok && product <= tol;
      break;
    }
    case Classification::Kind::verdict: {
      const HTypeVerdict v = verify_h_type(alg, tol);
      out << "recomputed_status: " << to_string(v.status) << "\n";
      ok = v.status == cert.content.verdict.status;
      break;
    }
  }
  out << "certificate: " << (ok ? "accepted" : "rejected") << " at tolerance " << tol << "\n";
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct, verify and classify H-type metric Lie algebras", "htype"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Write a fixture algebra");
  generate->require_subcommand(1);
  int n = 1;
  int center_dim = 1;
  int module_dim = 2;
  std::string output;
  std::string sum_left, sum_right;

  auto* gen_hc = generate->add_subcommand("heisenberg-complex", "Complex Heisenberg algebra h^{2n+1}_C");
  gen_hc->add_option("--n", n, "Heisenberg parameter")->required()->check(CLI::PositiveNumber);
  gen_hc->add_option("-o,--output", output, "Output path")->required();
  auto* gen_hr = generate->add_subcommand("heisenberg-real", "Real Heisenberg algebra h^{2n+1}");
  gen_hr->add_option("--n", n, "Heisenberg parameter")->required()->check(CLI::PositiveNumber);
  gen_hr->add_option("-o,--output", output, "Output path")->required();
  auto* gen_cl = generate->add_subcommand("clifford", "H-type algebra from standard Clifford generators");
  gen_cl->add_option("--center-dim", center_dim, "Center dimension d")->required();
  gen_cl->add_option("--module-dim", module_dim, "Module dimension m")->required();
  gen_cl->add_option("-o,--output", output, "Output path")->required();
  auto* gen_ds = generate->add_subcommand("direct-sum", "Direct sum of two algebra files");
  gen_ds->add_option("A", sum_left, "First summand")->required();
  gen_ds->add_option("B", sum_right, "Second summand")->required();
  gen_ds->add_option("-o,--output", output, "Output path")->required();

  std::string path;
  std::optional<double> tol_flag;
  bool as_json = false;
  bool no_validate = false;

  auto* verify = app.add_subcommand("verify", "Decide whether an algebra is H-type");
  verify->add_option("PATH", path, "Algebra file")->required();
  verify->add_option("--tol", tol_flag, "Tolerance");
  verify->add_flag("--json", as_json, "Print a certificate document");
  verify->add_flag("--no-validate", no_validate, "Skip axiom validation on load");

  std::string pivot_name{to_string(PivotRule::largest_projection)};
  std::string cert_out;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a complex H-type algebra");
  classify_cmd->add_option("PATH", path, "Algebra file")->required();
  classify_cmd->add_option("--tol", tol_flag, "Tolerance");
  classify_cmd->add_option("--pivot", pivot_name, "Pivot rule")
      ->check(CLI::IsMember({"largest-projection", "first-coordinate", "last-coordinate"}));
  classify_cmd->add_option("-o,--output", cert_out, "Certificate output path");
  classify_cmd->add_flag("--json", as_json, "Print the certificate document");

  std::uint64_t seed = 0;
  auto* scramble_cmd = app.add_subcommand("scramble", "Hide the basis behind a seeded isometry");
  scramble_cmd->add_option("PATH", path, "Algebra file")->required();
  scramble_cmd->add_option("--seed", seed, "Random seed")->required();
  scramble_cmd->add_option("-o,--output", output, "Output path")->required();

  std::string cert_path;
  auto* check_cmd = app.add_subcommand("check-certificate", "Re-check a certificate against an algebra");
  check_cmd->add_option("ALGEBRA", path, "Algebra file")->required();
  check_cmd->add_option("CERT", cert_path, "Certificate file")->required();
  check_cmd->add_option("--tol", tol_flag, "Tolerance (defaults to the certificate's)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      StructuredAlgebra value;
      Metadata meta{{"provenance", "generate"}};
      if (gen_hc->parsed()) {
        value = heisenberg_complex(n);
        meta["name"] = "heisenberg-complex-" + std::to_string(n);
      } else if (gen_hr->parsed()) {
        value = {heisenberg_real(n), std::nullopt};
        meta["name"] = "heisenberg-real-" + std::to_string(n);
      } else if (gen_cl->parsed()) {
        value = {from_clifford_representation(standard_clifford_generators(center_dim, module_dim)), std::nullopt};
        meta["name"] = "clifford-d" + std::to_string(center_dim) + "-m" + std::to_string(module_dim);
      } else {
        const double tol = default_tolerance();
        const AlgebraDocument a = load_algebra(sum_left, LoadOptions{true, tol});
        const AlgebraDocument b = load_algebra(sum_right, LoadOptions{true, tol});
        value = direct_sum(a.value, b.value);
        const auto name_of = [](const AlgebraDocument& d, const std::string& fallback) {
          auto it = d.metadata.find("name");
          return it == d.metadata.end() ? fallback : it->second;
        };
        meta["name"] = name_of(a, sum_left) + "+" + name_of(b, sum_right);
      }
      save_algebra(value, output, meta);
      out << "wrote " << output << " (dim " << value.algebra.dim() << ")\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      double tol = kDefaultTolerance;
      const AlgebraDocument doc = load_with_tolerance(path, tol_flag, !no_validate, tol);
      const HTypeVerdict v = verify_h_type(doc.value.algebra, tol);
      if (as_json) {
        Classification c;
        c.verdict = v;
        out << serialize_certificate(c, tol);
      } else {
        print_verdict(out, v);
      }
      return v.status == VerdictStatus::h_type ? kExitOk : kExitNegative;
    }

    if (classify_cmd->parsed()) {
      double tol = kDefaultTolerance;
      const AlgebraDocument doc = load_with_tolerance(path, tol_flag, true, tol);
      const Classification c = classify(doc.value.algebra, doc.value.complex, tol, parse_pivot_rule(pivot_name));
      const std::string cert = serialize_certificate(c, tol);
      if (!cert_out.empty()) write_text_file(cert_out, cert);
      if (as_json) {
        out << cert;
      } else {
        out << "kind: " << to_string(c.kind()) << "\n";
        if (c.result) {
          out << "n: " << c.result->n << "\n"
              << "bracket_residual: " << c.result->residuals.bracket << "\n"
              << "metric_residual: " << c.result->residuals.metric << "\n"
              << "complex_structure_residual: " << c.result->residuals.complex_structure << "\n";
        }
        if (c.obstruction) {
          out << "obstruction_kind: " << to_string(c.obstruction->kind) << "\n"
              << "product_norm: " << c.obstruction->product_norm << "\n";
        }
        print_verdict(out, c.verdict);
        if (!c.diagnostic.empty()) out << "diagnostic: " << c.diagnostic << "\n";
      }
      if (c.kind() == Classification::Kind::verdict && c.verdict.status == VerdictStatus::h_type) {
        err << "classification refused: " << c.diagnostic << "\n";
      }
      return exit_for(c);
    }

    if (scramble_cmd->parsed()) {
      double tol = kDefaultTolerance;
      const AlgebraDocument doc = load_with_tolerance(path, tol_flag, true, tol);
      const Scrambled s = scramble(doc.value, seed);
      Metadata meta = doc.metadata;
      meta["provenance"] = "scramble";
      meta["seed"] = std::to_string(seed);
      save_algebra(s.value, output, meta);
      out << "wrote " << output << " (seed " << seed << ")\n";
      return kExitOk;
    }

    if (check_cmd->parsed()) return check_certificate(path, cert_path, tol_flag, out);
  } catch (const Error& e) {
    err << "error";
    if (!e.stage().empty()) err << " [" << e.stage() << "]";
    err << ": " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitUsage;
}

}  // namespace htype
