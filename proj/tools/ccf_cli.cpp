// Command-line front end: sweeps and simulations land as CSV (with a
// key=value meta comment line) plus a JSON sidecar capturing the full
// configuration. Exits nonzero on any invariant violation.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccf/scenarios.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  double snr_db = 10.0;
  std::uint64_t seed = 1;
  int budget_level = 2;
  std::string out;
  int trials = 500;
};

void add_common(CLI::App* sub, CommonOpts& o, const std::string& default_out) {
  o.out = default_out;
  sub->add_option("--snr-db", o.snr_db, "transmit SNR in dB");
  sub->add_option("--seed", o.seed, "master RNG seed");
  sub->add_option("--budget", o.budget_level, "search budget level 0..5")->check(CLI::Range(0, 5));
  sub->add_option("--out", o.out, "output CSV path (JSON sidecar written alongside)");
  sub->add_option("--trials", o.trials, "Monte Carlo trial count")->check(CLI::PositiveNumber);
}

json budget_json(const ccf::SearchBudget& b) {
  return {{"coeff_bound", b.coeff_bound},
          {"grid_points", b.grid_points},
          {"refine_iters", b.refine_iters},
          {"all_subsets_B", b.all_subsets_B}};
}

void emit(const ccf::Table& t, const std::string& out_path, json config) {
  ccf::write_csv(out_path, t);
  config["output"] = out_path;
  config["rows"] = t.rows.size();
  for (const auto& [k, v] : t.meta) config["meta"][k] = v;
  ccf::write_text_file(out_path + ".json", config.dump(2) + "\n");
  std::cout << "wrote " << out_path << " (" << t.rows.size() << " rows)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-lattice compute-and-forward toolkit"};
  app.require_subcommand(1);

  CommonOpts ex1, ex2, ex3, ex4, dmt, lnk, out_o;

  auto* s1 = app.add_subcommand("example1", "two-transmitter rate curves vs cooperation gain");
  add_common(s1, ex1, "example1.csv");
  int ex1_points = 41;
  s1->add_option("--points", ex1_points, "sweep points");

  auto* s2 = app.add_subcommand("example2", "three transmitters on an arc, mean rates vs arclength");
  add_common(s2, ex2, "example2.csv");
  int ex2_arc_points = 25;
  double ex2_pathloss = 4.0;
  s2->add_option("--points", ex2_arc_points, "arclength sweep points");
  s2->add_option("--pathloss", ex2_pathloss, "pathloss exponent");

  auto* s3 = app.add_subcommand("example3", "direct-gain sweep, strict coefficient set");
  add_common(s3, ex3, "example3.csv");
  int ex3_points = 41;
  std::vector<double> ex3_snrs;
  s3->add_option("--points", ex3_points, "sweep points");
  s3->add_option("--snr-db-list", ex3_snrs, "SNR grid in dB (overrides --snr-db)")->delimiter(',');

  auto* s4 = app.add_subcommand("example4", "two-receiver cross-gain sweep");
  add_common(s4, ex4, "example4.csv");
  int ex4_points = 41;
  s4->add_option("--points", ex4_points, "sweep points");

  auto* sd = app.add_subcommand("dmt", "diversity-multiplexing tradeoff curves");
  add_common(sd, dmt, "dmt.csv");
  int dmt_L = 2, dmt_points = 101;
  sd->add_option("--num-transmitters", dmt_L, "number of transmitters")->check(CLI::Range(2, 16));
  sd->add_option("--points", dmt_points, "multiplexing-gain grid points");

  auto* sl = app.add_subcommand("linksim", "block-Markov link simulation trials");
  add_common(sl, lnk, "linksim.csv");
  lnk.snr_db = 30.0;
  lnk.trials = 200;
  double lnk_noise = 1.0;
  int lnk_blocks = 3;
  bool lnk_genie = false;
  sl->add_option("--noise-var", lnk_noise, "receiver/transmitter noise variance");
  sl->add_option("--blocks", lnk_blocks, "message blocks per round")->check(CLI::Range(1, 64));
  sl->add_flag("--genie", lnk_genie, "skip transmitter decoding (genie-aided)");

  auto* so = app.add_subcommand("outage", "closed-form and Monte Carlo outage curves");
  add_common(so, out_o, "outage.csv");
  out_o.trials = 100000;
  std::string out_scheme = "nc_align";
  int out_L = 2;
  double out_r = 0.5;
  std::vector<double> out_snrs = {10, 15, 20, 25, 30};
  so->add_option("--scheme", out_scheme, "nc_align or random_coop")
      ->check(CLI::IsMember({"nc_align", "random_coop"}));
  so->add_option("--num-transmitters", out_L, "number of transmitters")->check(CLI::Range(2, 16));
  so->add_option("--rate", out_r, "multiplexing gain r")->check(CLI::Range(0.0, 1.0));
  so->add_option("--snr-db-list", out_snrs, "SNR grid in dB")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (s1->parsed()) {
      ccf::SearchBudget b = ccf::SearchBudget::from_level(ex1.budget_level);
      emit(ccf::run_example1(ex1.snr_db, b, ex1.seed, ex1_points), ex1.out,
           {{"verb", "example1"}, {"snr_db", ex1.snr_db}, {"seed", ex1.seed}, {"points", ex1_points},
            {"budget", budget_json(b)}});
    } else if (s2->parsed()) {
      ccf::SearchBudget b = ccf::SearchBudget::from_level(ex2.budget_level);
      emit(ccf::run_example2(ex2.snr_db, b, ex2.seed, ex2.trials, ex2_arc_points, ex2_pathloss), ex2.out,
           {{"verb", "example2"}, {"snr_db", ex2.snr_db}, {"seed", ex2.seed}, {"trials", ex2.trials},
            {"arc_points", ex2_arc_points}, {"pathloss", ex2_pathloss}, {"budget", budget_json(b)}});
    } else if (s3->parsed()) {
      ccf::SearchBudget b = ccf::SearchBudget::from_level(ex3.budget_level);
      if (ex3_snrs.empty()) ex3_snrs = {ex3.snr_db};
      emit(ccf::run_example3(ex3_snrs, b, ex3.seed, ex3_points), ex3.out,
           {{"verb", "example3"}, {"snr_db_list", ex3_snrs}, {"seed", ex3.seed}, {"points", ex3_points},
            {"budget", budget_json(b)}});
    } else if (s4->parsed()) {
      ccf::SearchBudget b = ccf::SearchBudget::from_level(ex4.budget_level);
      emit(ccf::run_example4({ex4.snr_db}, b, ex4.seed, ex4_points), ex4.out,
           {{"verb", "example4"}, {"snr_db", ex4.snr_db}, {"seed", ex4.seed}, {"points", ex4_points},
            {"budget", budget_json(b)}});
    } else if (sd->parsed()) {
      emit(ccf::run_dmt_figure(dmt_L, dmt_points), dmt.out,
           {{"verb", "dmt"}, {"num_transmitters", dmt_L}, {"points", dmt_points}});
    } else if (sl->parsed()) {
      ccf::RoundConfig cfg = ccf::default_linksim_config(lnk.snr_db, lnk_noise);
      cfg.num_blocks = lnk_blocks;
      cfg.genie = lnk_genie;
      cfg.validate();
      emit(ccf::run_linksim_trials(cfg, lnk.trials, lnk.seed), lnk.out,
           {{"verb", "linksim"}, {"snr_db", lnk.snr_db}, {"noise_var", lnk_noise}, {"blocks", lnk_blocks},
            {"genie", lnk_genie}, {"trials", lnk.trials}, {"seed", lnk.seed},
            {"code", ccf::params_to_string(cfg.code)}});
    } else if (so->parsed()) {
      emit(ccf::run_outage(out_scheme, out_L, out_r, out_snrs, out_o.trials, out_o.seed), out_o.out,
           {{"verb", "outage"}, {"scheme", out_scheme}, {"num_transmitters", out_L}, {"rate", out_r},
            {"snr_db_list", out_snrs}, {"trials", out_o.trials}, {"seed", out_o.seed}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
