// SPDX-License-Identifier: Apache-2.0
//
// kdtomo command-line front end.
//
//   verify            run the cross-module identity suite over random states
//   clone-stats       cloning-channel joint statistics and background removal
//   cswap-tomography  controlled-swap readout and direct state reconstruction
//   weak-demo         weak values by definition, table average, and pointer
//   reconstruct       rebuild a density matrix from a stored complex table
//
// Exit codes: 0 success; 1 verification or tolerance failure (also domain
// errors on valid input); 2 usage or validation error; 3 I/O or parse error.
// Every error path prints a single line "error [category] message" to stderr.
// Identical (command, flags, seed) runs produce byte-identical output.

#include "kdtomo/kdtomo.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace kdtomo;

std::string format_complex(Complex z) {
  const std::string re = format_double(z.real());
  const std::string im = format_double(std::abs(z.imag()));
  return re + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

struct Options {
  int dim = 2;
  int trials = 100;
  std::uint64_t seed = 42;
  double tol = -1.0;  // -1: pick a mode-dependent default
  double perturb = 0.0;
  long long shots = 0;  // 0: exact statistics
  std::string input;
  std::string output;
  std::string format = "json";
};

//==============================================================================
// verify
//==============================================================================

int cmd_verify(const Options& opt) {
  const double tol = opt.tol > 0 ? opt.tol : 1e-10;
  const VerifyReport report =
      run_identity_suite(opt.dim, opt.trials, opt.seed, tol, opt.perturb);
  for (const auto& r : report.identities)
    std::cout << "identity " << r.name << ": max deviation " << format_double(r.max_deviation)
              << " over " << r.trials << " trials: " << (r.pass ? "PASS" : "FAIL") << "\n";
  int failures = 0;
  for (const auto& r : report.identities) {
    if (r.pass) continue;
    ++failures;
    std::cerr << "error [verify] identity " << r.name << " deviation "
              << format_double(r.max_deviation) << " exceeds tolerance " << format_double(tol)
              << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
  }
  std::cout << "verify: " << (report.identities.size() - failures) << "/"
            << report.identities.size() << " identities passed (dim=" << opt.dim
            << ", trials=" << opt.trials << ", seed=" << opt.seed
            << ", tol=" << format_double(tol) << ")\n";
  return failures == 0 ? 0 : 1;
}

//==============================================================================
// clone-stats
//==============================================================================

void print_prob_block(const char* title, const ProbTable& t) {
  std::cout << title << ":\na,b,p\n";
  for (int a = 0; a < t.dim(); ++a)
    for (int b = 0; b < t.dim(); ++b)
      std::cout << a << "," << b << "," << format_double(t.entry(a, b)) << "\n";
}

int cmd_clone_stats(const Options& opt) {
  PureState psi = opt.input.empty()
                      ? PureState::basis_state(opt.dim, 0)
                      : pure_state_from_json(load_json(opt.input), opt.input);
  if (psi.dim() != opt.dim && !opt.input.empty())
    std::cerr << "note: --dim " << opt.dim << " overridden by input state dimension "
              << psi.dim() << "\n";
  const int d = psi.dim();
  const OrthonormalBasis basis_a = computational_basis(d);
  const OrthonormalBasis basis_b = fourier_basis(d);
  const DensityMatrix rho = DensityMatrix::pure(psi);

  const CloneOutput clone = apply_clone_channel(rho);
  ProbTable p = clone_joint_probabilities(clone, basis_a, basis_b);
  if (opt.shots > 0) p = sample_table(p, opt.shots, opt.seed);

  // Exact tables estimate the backgrounds from their own marginals. Sampled
  // tables use the known input state instead: near the simplex boundary the
  // self-estimated inversion rejects ordinary shot noise as out of range.
  RealMatrix re_kd(d, d);
  if (opt.shots > 0) {
    RealVector qa(d), qb(d);
    for (int k = 0; k < d; ++k) {
      qa(k) = basis_a.vector(k).dot(rho.matrix() * basis_a.vector(k)).real();
      qb(k) = basis_b.vector(k).dot(rho.matrix() * basis_b.vector(k)).real();
    }
    re_kd = background_subtract(p, d, qa, qb);
  } else {
    re_kd = background_subtract(p, d);
  }

  const Matrix reduced = partial_trace(clone.state, 1);
  const double fidelity = psi.amplitudes().dot(reduced * psi.amplitudes()).real();

  std::cout << "clone-stats: dim=" << d << " bases=" << basis_a.label() << "/"
            << basis_b.label() << " mode="
            << (opt.shots > 0 ? "sampled shots=" + std::to_string(opt.shots) +
                                    " seed=" + std::to_string(opt.seed)
                              : std::string("exact"))
            << " background=" << (opt.shots > 0 ? "known-state" : "self-estimated") << "\n";
  std::cout << "single-clone fidelity: " << format_double(fidelity) << "\n";
  print_prob_block("p(a,b)", p);
  std::cout << "marginal_a:\na,p\n";
  const RealVector ma = p.marginal_a(), mb = p.marginal_b();
  for (int a = 0; a < d; ++a) std::cout << a << "," << format_double(ma(a)) << "\n";
  std::cout << "marginal_b:\nb,p\n";
  for (int b = 0; b < d; ++b) std::cout << b << "," << format_double(mb(b)) << "\n";
  std::cout << "recovered_re_kd:\na,b,re\n";
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      std::cout << a << "," << b << "," << format_double(re_kd(a, b)) << "\n";

  if (!opt.output.empty()) {
    if (opt.format == "csv") {
      write_text_file(opt.output, prob_table_to_csv(p));
    } else {
      Json j{{"dim", d},
             {"fidelity", fidelity},
             {"prob_table", prob_table_to_json(p)},
             {"recovered_re_kd", Json::array()}};
      for (int a = 0; a < d; ++a) {
        Json row = Json::array();
        for (int b = 0; b < d; ++b) row.push_back(re_kd(a, b));
        j["recovered_re_kd"].push_back(std::move(row));
      }
      write_text_file(opt.output, j.dump(2) + "\n");
    }
    std::cout << "wrote " << opt.format << ": " << opt.output << "\n";
  }
  return 0;
}

//==============================================================================
// cswap-tomography
//==============================================================================

int cmd_cswap_tomography(const Options& opt) {
  DensityMatrix rho = opt.input.empty()
                          ? DensityMatrix::pure(haar_random_state(opt.dim, opt.seed))
                          : state_from_json(load_json(opt.input), opt.input);
  const int d = rho.dim();
  const OrthonormalBasis basis_a = computational_basis(d);
  const OrthonormalBasis basis_b = fourier_basis(d);

  const CswapOutput out = controlled_swap_output(rho);
  auto [px0, px1] = cswap_joint_probabilities(out, ControlAxis::X, basis_a, basis_b);
  auto [py0, py1] = cswap_joint_probabilities(out, ControlAxis::Y, basis_a, basis_b);
  if (opt.shots > 0) {
    // One joint multinomial draw per control-axis setting; the Y run uses the
    // next seed so the two settings are independent but still reproducible.
    std::tie(px0, px1) = sample_table_pair(px0, px1, opt.shots, opt.seed);
    std::tie(py0, py1) = sample_table_pair(py0, py1, opt.shots, opt.seed + 1);
  }
  const ComplexJointTable kd = extract_kd_from_cswap(px0, px1, py0, py1, d);
  const Reconstruction rec = reconstruct_density_matrix(kd);
  const double deviation = (rec.matrix - rho.matrix()).cwiseAbs().maxCoeff();
  const double tol = opt.tol > 0 ? opt.tol : (opt.shots > 0 ? 1e-2 : 1e-10);

  std::cout << "cswap-tomography: dim=" << d << " bases=" << basis_a.label() << "/"
            << basis_b.label() << " mode="
            << (opt.shots > 0 ? "sampled shots=" + std::to_string(opt.shots) + " per axis"
                              : std::string("exact"))
            << " seed=" << opt.seed << "\n";
  std::cout << "input: " << (opt.input.empty() ? "random pure state" : opt.input) << "\n";
  std::cout << "control outcome mass: p(0x)=" << format_double(px0.sum())
            << " p(1x)=" << format_double(px1.sum()) << " p(0y)=" << format_double(py0.sum())
            << " p(1y)=" << format_double(py1.sum()) << "\n";
  std::cout << "reconstruction hermiticity error: " << format_double(rec.hermiticity_error)
            << "\n";
  std::cout << "reconstruction trace error: " << format_double(rec.trace_error) << "\n";
  std::cout << "max deviation from input: " << format_double(deviation) << "\n";

  if (!opt.output.empty()) {
    if (opt.format == "csv") {
      write_text_file(opt.output, kd_table_to_csv(kd));
      std::cout << "wrote extracted kd table csv: " << opt.output << "\n";
    } else {
      Json j{{"dim", d},
             {"reconstructed", matrix_to_json(rec.matrix)},
             {"hermiticity_error", rec.hermiticity_error},
             {"trace_error", rec.trace_error},
             {"max_deviation_from_input", deviation}};
      write_text_file(opt.output, j.dump(2) + "\n");
      std::cout << "wrote reconstruction json: " << opt.output << "\n";
    }
  }

  if (deviation > tol) {
    std::cerr << "error [verify] reconstruction deviation " << format_double(deviation)
              << " exceeds tolerance " << format_double(tol) << "\n";
    return 1;
  }
  std::cout << "result: PASS (tolerance " << format_double(tol) << ")\n";
  return 0;
}

//==============================================================================
// weak-demo
//==============================================================================

int cmd_weak_demo(const Options&) {
  // Fixed qubit preset: preparation (|0>+|1>)/sqrt(2), post-selection
  // (2|0>-|1>)/sqrt(5). Both observables live in the computational basis, so
  // one joint table serves both conditional averages. sigma-z has the
  // anomalous weak value 3; the |0><0| projector gives exactly 2.
  const int d = 2;
  const double theta = 0.05;
  Vector amp(2);
  amp << Complex(1, 0), Complex(1, 0);
  const PureState psi = PureState::normalized(std::move(amp));
  Matrix bvecs(2, 2);
  bvecs << Complex(2, 0), Complex(1, 0), Complex(-1, 0), Complex(2, 0);
  bvecs /= std::sqrt(5.0);
  const OrthonormalBasis basis_b(std::move(bvecs), "skewed");
  const OrthonormalBasis basis_a = computational_basis(d);
  const Vector post = basis_b.vector(0);

  RealVector sigma_z(2), proj0(2);
  sigma_z << 1.0, -1.0;
  proj0 << 1.0, 0.0;
  const std::vector<std::pair<std::string, Observable>> observables = {
      {"sigma-z", Observable(basis_a, sigma_z)},
      {"projector-0", Observable(basis_a, proj0)}};

  const ComplexJointTable kd = kd_distribution(DensityMatrix::pure(psi), basis_a, basis_b);

  std::cout << "weak-demo: dim=2 theta=" << format_double(theta) << " preset=anomalous\n";
  std::cout << "psi = (|0> + |1>)/sqrt(2), post-selection b = (2|0> - |1>)/sqrt(5)\n";
  for (const auto& [name, obs] : observables) {
    const Complex by_definition = weak_value(obs, psi, post).value;
    const Complex by_table = weak_value_from_kd(obs, kd, 0);
    Complex by_pointer = 0.0;
    for (int a = 0; a < d; ++a) {
      if (obs.eigenvalue(a) == 0.0) continue;
      const WeakMeasConfig cfg(theta, basis_a, a, psi, post);
      by_pointer += obs.eigenvalue(a) * weak_limit_extrapolate(cfg);
    }
    std::cout << "observable " << name << ": definition=" << format_complex(by_definition)
              << " kd-average=" << format_complex(by_table)
              << " pointer=" << format_complex(by_pointer) << "\n";
  }

  const NegativityReport neg = negativity_report(kd);
  std::cout << "kd negativity: min re = " << format_double(neg.min_re) << " at (a="
            << neg.min_re_a << ",b=" << neg.min_re_b
            << "), negative entries: " << neg.negative_count << "\n";
  return 0;
}

//==============================================================================
// reconstruct
//==============================================================================

int cmd_reconstruct(const Options& opt) {
  const ComplexJointTable kd = kd_table_from_json(load_json(opt.input), opt.input);
  const Reconstruction rec = reconstruct_density_matrix(kd);
  std::cout << "reconstruct: input " << opt.input << " dim=" << kd.dim() << "\n";
  std::cout << "hermiticity error: " << format_double(rec.hermiticity_error) << "\n";
  std::cout << "trace error: " << format_double(rec.trace_error) << "\n";
  const Json j{{"dim", kd.dim()},
               {"matrix", matrix_to_json(rec.matrix)},
               {"hermiticity_error", rec.hermiticity_error},
               {"trace_error", rec.trace_error}};
  if (!opt.output.empty()) {
    write_text_file(opt.output, j.dump(2) + "\n");
    std::cout << "wrote reconstruction json: " << opt.output << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloning, controlled-swap, and weak-measurement statistics toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool with_state_io) {
    sub->add_option("--dim", opt.dim, "Hilbert space dimension per system")
        ->check(CLI::Range(2, 8));
    sub->add_option("--seed", opt.seed, "base seed for all randomness");
    sub->add_option("--tol", opt.tol, "pass/fail tolerance (mode-dependent default)")
        ->check(CLI::PositiveNumber);
    if (with_state_io) {
      sub->add_option("--input", opt.input, "input JSON file");
      sub->add_option("--output", opt.output, "output file path");
      sub->add_option("--format", opt.format, "output file format")
          ->check(CLI::IsMember({"json", "csv"}));
    }
    return sub;
  };

  CLI::App* verify = add_common(app.add_subcommand("verify", "run the identity suite"), false);
  verify->add_option("--trials", opt.trials, "random trials per identity")
      ->check(CLI::PositiveNumber);
  verify->add_option("--perturb", opt.perturb,
                     "(test only) scale the cloning output by 1+x to force a failure");

  CLI::App* clone_stats =
      add_common(app.add_subcommand("clone-stats", "cloning-channel statistics"), true);
  clone_stats->add_option("--shots", opt.shots, "multinomial samples (0 = exact)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* cswap = add_common(
      app.add_subcommand("cswap-tomography", "controlled-swap reconstruction pipeline"), true);
  cswap->add_option("--shots", opt.shots, "samples per control-axis setting (0 = exact)")
      ->check(CLI::NonNegativeNumber);

  add_common(app.add_subcommand("weak-demo", "weak values three ways (fixed qubit preset)"),
             false);

  CLI::App* reconstruct =
      add_common(app.add_subcommand("reconstruct", "rebuild a state from a stored kd table"), true);
  reconstruct->get_option("--input")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error [usage] " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand("verify")) return cmd_verify(opt);
    if (app.got_subcommand("clone-stats")) return cmd_clone_stats(opt);
    if (app.got_subcommand("cswap-tomography")) return cmd_cswap_tomography(opt);
    if (app.got_subcommand("weak-demo")) return cmd_weak_demo(opt);
    if (app.got_subcommand("reconstruct")) return cmd_reconstruct(opt);
    std::cerr << "error [usage] no subcommand given\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error [io] " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error [parse] " << e.what() << "\n";
    return 3;
  } catch (const OrthogonalPostSelection& e) {
    std::cerr << "error [domain] " << e.what() << "\n";
    return 1;
  } catch (const UnsuitableBasisPair& e) {
    std::cerr << "error [domain] " << e.what() << "\n";
    return 1;
  } catch (const MalformedTable& e) {
    std::cerr << "error [domain] " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error [usage] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [internal] " << e.what() << "\n";
    return 1;
  }
}
