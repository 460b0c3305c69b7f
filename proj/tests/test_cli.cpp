#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qcafqmc/commands.hpp"
#include "qcafqmc/config.hpp"
#include "qcafqmc/error.hpp"

using namespace qcafqmc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* h2_inline = "2\\n\\nH 0 0 0\\nH 0 0 0.7414";

}  // namespace

TEST_CASE("config parsing materializes defaults and validates") {
  std::string resolved;
  RunConfig cfg = parse_config(R"({"method":"rhf","system":{"xyz_inline":")" +
                                   std::string(h2_inline) + R"("}})",
                               &resolved);
  CHECK(cfg.method == "rhf");
  CHECK(cfg.protocol.n_walkers == 256);
  CHECK(cfg.protocol.steps_per_block == 10);
  CHECK(cfg.seed_global == 7);
  CHECK(resolved.find("\"n_walkers\": 256") != std::string::npos);
  CHECK(resolved.find("\"equilibration_fraction\": 0.2") != std::string::npos);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"methodd":"rhf"})"),
                       doctest::Contains("unknown key 'methodd'"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"protocol":{"walkers":4}})"),
                       doctest::Contains("unknown key 'walkers'"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"system":{"xyzfile":"x"}})"),
                       doctest::Contains("unknown key 'xyzfile'"), Error);
  CHECK_THROWS_AS(parse_config("not json at all"), Error);
  CHECK_THROWS_AS(parse_config(R"({"method":"ccsd"})"), Error);
}

TEST_CASE("active space forms: full, entropy with threshold, explicit") {
  RunConfig a = parse_config(R"({"active_space":"full"})");
  CHECK(a.active.mode == ActiveSpec::Mode::full);
  RunConfig b = parse_config(R"({"active_space":"entropy:0.2"})");
  CHECK(b.active.mode == ActiveSpec::Mode::entropy);
  CHECK(b.active.threshold == doctest::Approx(0.2));
  RunConfig c = parse_config(R"({"active_space":[4,5,6]})");
  CHECK(c.active.mode == ActiveSpec::Mode::explicit_list);
  CHECK(c.active.orbitals == std::vector<int>{4, 5, 6});
}

TEST_CASE("force spec validation") {
  CHECK_THROWS_AS(parse_config(R"({"force":{"atom":0,"axis":"z"}})"), Error);
  RunConfig cfg =
      parse_config(R"({"force":{"atom":1,"axis":"z","delta_angstrom":1e-6}})");
  CHECK(cfg.has_force);
  CHECK(cfg.force.axis == 2);
  CHECK(cfg.force.delta_angstrom == doctest::Approx(1e-6));
}

TEST_CASE("dotted-path overrides") {
  std::string text = R"({"method":"rhf","protocol":{"n_walkers":128}})";
  std::string out = apply_overrides(
      text, {"protocol.n_walkers=512", "seeds.global=99", "method=fci"});
  RunConfig cfg = parse_config(out);
  CHECK(cfg.protocol.n_walkers == 512);
  CHECK(cfg.seed_global == 99);
  CHECK(cfg.method == "fci");
  CHECK_THROWS_AS(apply_overrides(text, {"novalue"}), Error);
}

TEST_CASE("cmd_energy rhf writes summary and resolved config") {
  std::string dir = "cli_test_out_rhf";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(
      R"({"method":"rhf","output_dir":")" + dir + R"(","system":{"xyz_inline":")" +
          std::string(h2_inline) + R"("}})",
      &resolved);
  int status = cmd_energy(cfg, resolved);
  CHECK(status == 0);
  std::string summary = slurp(dir + "/summary.json");
  CHECK(summary.find("-1.1166") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/resolved_config.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_energy fci on H4") {
  std::string dir = "cli_test_out_fci";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(
      R"({"method":"fci","output_dir":")" + dir +
          R"(","system":{"xyz_inline":"4\n\nH 0 0 0\nH 0 0 1.0\nH 0 0 2.0\nH 0 0 3.0"}})",
      &resolved);
  CHECK(cmd_energy(cfg, resolved) == 0);
  std::string summary = slurp(dir + "/summary.json");
  CHECK(summary.find("-2.166") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_energy qc-afqmc smoke run emits a series and hashes") {
  std::string dir = "cli_test_out_qc";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(
      R"({"method":"qc-afqmc","trial":"upccd","output_dir":")" + dir +
          R"(","system":{"xyz_inline":")" + std::string(h2_inline) +
          R"("},"protocol":{"n_walkers":12,"n_blocks":6,"dt":0.02}})",
      &resolved);
  CHECK(cmd_energy(cfg, resolved) == 0);
  std::string summary = slurp(dir + "/summary.json");
  CHECK(summary.find("pivot_hash") != std::string::npos);
  CHECK(summary.find("trial_hash") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/energy_series.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("failures produce a structured error artifact and nonzero status") {
  std::string dir = "cli_test_out_err";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(R"({"method":"fci","output_dir":")" + dir +
                                   R"(","system":{"xyz_inline":"1\n\nH 0 0 0"}})",
                               &resolved);
  // odd electron count: RHF rejects H atom
  CHECK(cmd_energy(cfg, resolved) == 1);
  std::string err = slurp(dir + "/error.json");
  CHECK(err.find("\"code\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_active_space explicit selection is echoed") {
  std::string dir = "cli_test_out_act";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(R"({"method":"fci","active_space":[0,1],"output_dir":")" +
                                   dir + R"(","system":{"xyz_inline":")" +
                                   std::string(h2_inline) + R"("}})",
                               &resolved);
  CHECK(cmd_active_space(cfg, resolved) == 0);
  std::string rep = slurp(dir + "/entropy_report.json");
  CHECK(rep.find("manual selection") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_active_space entropy report on stretched H2 recommends both orbitals") {
  std::string dir = "cli_test_out_act2";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(
      R"({"method":"fci","output_dir":")" + dir +
          R"(","system":{"xyz_inline":"2\n\nH 0 0 0\nH 0 0 10.0"}})",
      &resolved);
  CHECK(cmd_active_space(cfg, resolved) == 0);
  std::string rep = slurp(dir + "/entropy_report.json");
  CHECK(rep.find("\"recommended\": [\n    0,\n    1\n  ]") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/entropy.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_force fci on H2") {
  std::string dir = "cli_test_out_force";
  std::filesystem::remove_all(dir);
  std::string resolved;
  RunConfig cfg = parse_config(
      R"({"method":"fci","output_dir":")" + dir + R"(","system":{"xyz_inline":")" +
          std::string(h2_inline) +
          R"("},"force":{"atom":1,"axis":"z","delta_angstrom":1e-5}})",
      &resolved);
  CHECK(cmd_force(cfg, resolved) == 0);
  std::string out = slurp(dir + "/force.json");
  CHECK(out.find("force_HaA") != std::string::npos);
  std::filesystem::remove_all(dir);
}
