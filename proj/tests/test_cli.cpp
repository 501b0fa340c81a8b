// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line binary: exit codes, error channel
// discipline, deterministic reruns, and file round trips. The binary path
// comes from the build system via KDTOMO_CLI_PATH.

#include "kdtomo/io.hpp"
#include "kdtomo/kd.hpp"
#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#ifdef _WIN32
#error "the CLI tests assume a POSIX shell"
#endif
#include <sys/wait.h>

using namespace kdtomo;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  return std::filesystem::exists(path) ? read_text_file(path) : std::string();
}

CliResult run_cli(const std::string& args) {
  const std::string out_path = temp_file("kdtomo_cli_stdout.txt");
  const std::string err_path = temp_file("kdtomo_cli_stderr.txt");
  const std::string cmd =
      std::string(KDTOMO_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path), slurp(err_path)};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("verify command reports per-identity results", "[cli]") {
  const CliResult r = run_cli("verify --dim 2 --trials 10 --seed 7");
  REQUIRE(r.exit_code == 0);
  REQUIRE(contains(r.out, "identity coherence-partial-traces:"));
  REQUIRE(contains(r.out, "identity reconstruction:"));
  REQUIRE(contains(r.out, "verify: 7/7 identities passed"));
  REQUIRE(!contains(r.out, "FAIL"));
  REQUIRE(r.err.empty());
}

TEST_CASE("verify with an injected perturbation fails loudly", "[cli]") {
  const CliResult r = run_cli("verify --dim 2 --trials 6 --seed 7 --perturb 1e-6");
  REQUIRE(r.exit_code == 1);
  REQUIRE(contains(r.err, "error [verify]"));
  REQUIRE(contains(r.err, "clone-roundtrip"));
  REQUIRE(contains(r.out, "FAIL"));
}

TEST_CASE("usage errors exit with code 2", "[cli]") {
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("verify --dim 1").exit_code == 2);
  REQUIRE(run_cli("verify --dim 9").exit_code == 2);
  REQUIRE(run_cli("verify --trials 0").exit_code == 2);
  REQUIRE(run_cli("reconstruct").exit_code == 2);
  REQUIRE(run_cli("no-such-command").exit_code == 2);
  const CliResult help = run_cli("--help");
  REQUIRE(help.exit_code == 0);
  REQUIRE(contains(help.out, "verify"));
}

TEST_CASE("clone-stats is deterministic and writes parseable tables", "[cli]") {
  const std::string csv_a = temp_file("kdtomo_clone_a.csv");
  const std::string csv_b = temp_file("kdtomo_clone_b.csv");
  const CliResult r1 =
      run_cli("clone-stats --dim 2 --seed 5 --format csv --output " + csv_a);
  const CliResult r2 =
      run_cli("clone-stats --dim 2 --seed 5 --format csv --output " + csv_b);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  REQUIRE(read_text_file(csv_a) == read_text_file(csv_b));

  const CliResult plain1 = run_cli("clone-stats --dim 2 --seed 5");
  const CliResult plain2 = run_cli("clone-stats --dim 2 --seed 5");
  REQUIRE(plain1.out == plain2.out);

  // Default input |0> probed in computational/Fourier bases.
  const ProbTable p = prob_table_from_csv(read_text_file(csv_a));
  REQUIRE(p.dim() == 2);
  REQUIRE(p.entry(0, 0) == Catch::Approx(5.0 / 12.0).margin(1e-14));
  REQUIRE(p.entry(0, 1) == Catch::Approx(5.0 / 12.0).margin(1e-14));
  REQUIRE(p.entry(1, 0) == Catch::Approx(1.0 / 12.0).margin(1e-14));
  REQUIRE(p.entry(1, 1) == Catch::Approx(1.0 / 12.0).margin(1e-14));

  const std::string json_path = temp_file("kdtomo_clone.json");
  const CliResult r3 = run_cli("clone-stats --dim 2 --seed 5 --output " + json_path);
  REQUIRE(r3.exit_code == 0);
  const Json j = load_json(json_path);
  REQUIRE(j.at("fidelity").get<double>() == Catch::Approx(5.0 / 6.0).margin(1e-14));
  REQUIRE(j.at("recovered_re_kd")[0][0].get<double>() == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("clone-stats accepts a state file and finite shots", "[cli]") {
  const std::string state_path = temp_file("kdtomo_state.json");
  write_text_file(state_path,
                  pure_state_to_json(haar_random_state(3, 610)).dump() + "\n");
  const CliResult exact = run_cli("clone-stats --dim 3 --input " + state_path);
  REQUIRE(exact.exit_code == 0);
  REQUIRE(contains(exact.out, "single-clone fidelity:"));

  const CliResult s1 = run_cli("clone-stats --dim 2 --seed 5 --shots 50000");
  const CliResult s2 = run_cli("clone-stats --dim 2 --seed 5 --shots 50000");
  REQUIRE(s1.exit_code == 0);
  REQUIRE(s1.out == s2.out);
  REQUIRE(contains(s1.out, "shots"));
}

TEST_CASE("cswap-tomography round trips exactly without sampling", "[cli]") {
  const std::string rec_path = temp_file("kdtomo_cswap_rec.json");
  const CliResult r = run_cli("cswap-tomography --dim 3 --seed 9 --output " + rec_path);
  REQUIRE(r.exit_code == 0);
  REQUIRE(contains(r.out, "result: PASS"));
  const Json j = load_json(rec_path);
  REQUIRE(j.at("dim").get<int>() == 3);
  REQUIRE(j.at("max_deviation_from_input").get<double>() < 1e-10);
  const Matrix m = matrix_from_json(j.at("reconstructed"), "rec");
  REQUIRE(std::abs(m.trace() - Complex(1, 0)) < 1e-10);
}

TEST_CASE("cswap-tomography reads both state layouts from --input", "[cli]") {
  const std::string pure_path = temp_file("kdtomo_cswap_pure.json");
  const std::string mixed_path = temp_file("kdtomo_cswap_mixed.json");
  const std::string rec_path = temp_file("kdtomo_cswap_in_rec.json");
  write_text_file(pure_path, pure_state_to_json(PureState::basis_state(2, 0)).dump() + "\n");
  write_text_file(mixed_path, density_to_json(random_density(4, 2, 630)).dump() + "\n");

  const CliResult pure = run_cli("cswap-tomography --input " + pure_path + " --output " +
                                 rec_path);
  REQUIRE(pure.exit_code == 0);
  const Matrix m = matrix_from_json(load_json(rec_path).at("reconstructed"), "rec");
  REQUIRE(std::abs(m(0, 0) - Complex(1, 0)) < 1e-12);
  REQUIRE(std::abs(m(0, 1)) < 1e-12);
  REQUIRE(std::abs(m(1, 0)) < 1e-12);
  REQUIRE(std::abs(m(1, 1)) < 1e-12);

  const CliResult mixed = run_cli("cswap-tomography --input " + mixed_path);
  REQUIRE(mixed.exit_code == 0);
  REQUIRE(contains(mixed.out, "result: PASS"));
}

TEST_CASE("cswap-tomography with shots stays within the loose tolerance", "[cli]") {
  const CliResult r1 = run_cli("cswap-tomography --dim 2 --seed 11 --shots 400000");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(contains(r1.out, "result: PASS"));
  const CliResult r2 = run_cli("cswap-tomography --dim 2 --seed 11 --shots 400000");
  REQUIRE(r1.out == r2.out);
}

TEST_CASE("reconstruct recovers a state from a serialized table", "[cli]") {
  const DensityMatrix rho = random_density(3, 2, 620);
  const ComplexJointTable kd =
      kd_distribution(rho, computational_basis(3), fourier_basis(3));
  const std::string kd_path = temp_file("kdtomo_kd_in.json");
  const std::string rho_path = temp_file("kdtomo_rho_out.json");
  write_text_file(kd_path, kd_table_to_json(kd).dump() + "\n");

  const CliResult r = run_cli("reconstruct --input " + kd_path + " --output " + rho_path);
  REQUIRE(r.exit_code == 0);
  const Json j = load_json(rho_path);
  const Matrix m = matrix_from_json(j.at("matrix"), "rho");
  REQUIRE((m - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE(j.at("hermiticity_error").get<double>() < 1e-12);
}

TEST_CASE("reconstruct maps failures to the documented exit codes", "[cli]") {
  const ComplexJointTable degenerate = kd_distribution(
      DensityMatrix::maximally_mixed(2), computational_basis(2), computational_basis(2));
  const std::string kd_path = temp_file("kdtomo_kd_degenerate.json");
  write_text_file(kd_path, kd_table_to_json(degenerate).dump() + "\n");
  const CliResult domain = run_cli("reconstruct --input " + kd_path);
  REQUIRE(domain.exit_code == 1);
  REQUIRE(contains(domain.err, "error [domain]"));

  const CliResult missing = run_cli("reconstruct --input /nonexistent/kd.json");
  REQUIRE(missing.exit_code == 3);
  REQUIRE(contains(missing.err, "error [io]"));

  const std::string bad_path = temp_file("kdtomo_kd_bad.json");
  write_text_file(bad_path, "{ this is not json\n");
  const CliResult bad = run_cli("reconstruct --input " + bad_path);
  REQUIRE(bad.exit_code == 3);
  REQUIRE(contains(bad.err, "error [parse]"));
}

TEST_CASE("weak-demo prints the three-route comparison", "[cli]") {
  const CliResult r = run_cli("weak-demo");
  REQUIRE(r.exit_code == 0);
  REQUIRE(contains(r.out, "observable sigma-z: definition="));
  REQUIRE(contains(r.out, "observable projector-0: definition="));
  REQUIRE(contains(r.out, "kd-average="));
  REQUIRE(contains(r.out, "pointer="));
  REQUIRE(contains(r.out, "kd negativity: min re = -0."));
  REQUIRE(contains(r.out, "at (a=1,b=0), negative entries: 1"));
}
