// Command-line front end: sampling, transport fitting, contour export,
// uniformity and MANOVA tests, and the simulation-study tables.
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphot/experiments.hpp"
#include "sphot/gof.hpp"
#include "sphot/io.hpp"
#include "sphot/manova.hpp"
#include "sphot/models.hpp"
#include "sphot/transport.hpp"

namespace {

using namespace sphot;

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

grids::GridShape resolve_grid(const std::string& spec, int n, int d) {
  if (spec == "auto") return grids::auto_shape(n, d);
  const auto parts = parse_vector(spec);
  if (parts.size() != 3) throw std::invalid_argument("grid spec must be 'auto' or 'nR,nS,n0'");
  return {static_cast<int>(parts[0]), static_cast<int>(parts[1]), static_cast<int>(parts[2])};
}

// Optional JSON run configuration; explicit flags win over file values.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<int> n_mc;
  std::optional<std::string> grid;
  std::optional<std::string> score;
  std::optional<std::string> out;
};

RunConfig load_config(const std::string& path) {
  const auto j = nlohmann::json::parse(io::read_text(path));
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "seed" && value.is_number_unsigned()) cfg.seed = value.get<std::uint64_t>();
    else if (key == "alpha" && value.is_number()) cfg.alpha = value.get<double>();
    else if (key == "n_mc" && value.is_number_integer()) cfg.n_mc = value.get<int>();
    else if (key == "grid" && (value.is_string() || value.is_array())) {
      if (value.is_string()) cfg.grid = value.get<std::string>();
      else {
        const auto v = value.get<std::vector<int>>();
        if (v.size() != 3) throw std::invalid_argument("config: grid array must have 3 entries");
        cfg.grid = std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]);
      }
    } else if (key == "score" && value.is_string()) cfg.score = value.get<std::string>();
    else if (key == "out" && value.is_string()) cfg.out = value.get<std::string>();
    else throw std::invalid_argument("config: unknown or mistyped key '" + key + "'");
  }
  return cfg;
}

void emit_report(const std::string& json, const std::string& out_path) {
  std::cout << json;
  if (!out_path.empty()) io::write_text(out_path, json);
}

int cmd_sample(const std::string& family, int n, int d, std::uint64_t seed,
               const std::string& theta_s, double kappa, const std::string& mu_s,
               double beta_a, double beta_b, double lambda, double mu_angle,
               const std::string& weights_s, const std::string& kappas_s,
               const std::string& thetas_s, const std::string& out) {
  Rng rng(derive_seed(seed, "sample"));
  Sample sample;
  std::ostringstream resolved;
  resolved << "family=" << family << " n=" << n << " seed=" << seed;
  if (family == "uniform") {
    sample = models::sample_uniform(n, d, rng);
    resolved << " d=" << d;
  } else if (family == "vmf") {
    UnitVector theta(parse_vector(theta_s));
    sample = models::sample_vmf(n, {theta, kappa}, rng);
    resolved << " kappa=" << kappa << " theta=" << theta_s;
  } else if (family == "tangent_vmf") {
    UnitVector theta(parse_vector(theta_s));
    models::TangentVmfParams p{theta, parse_vector(mu_s), kappa, beta_a, beta_b};
    sample = models::sample_tangent_vmf(n, p, rng);
    resolved << " kappa=" << kappa << " theta=" << theta_s << " mu=" << mu_s
             << " beta=(" << beta_a << "," << beta_b << ")";
  } else if (family == "sine_skew") {
    sample = models::sample_sine_skew(n, {mu_angle, lambda, kappa}, rng);
    resolved << " lambda=" << lambda << " kappa=" << kappa << " mu=" << mu_angle;
  } else if (family == "mixture") {
    const auto weights = parse_vector(weights_s);
    const auto kappas = parse_vector(kappas_s);
    const auto theta_list = split(thetas_s, ';');
    if (weights.size() != kappas.size() || weights.size() != theta_list.size())
      throw std::invalid_argument("mixture: weights, kappas and thetas must align");
    std::vector<models::VmfParams> comps;
    for (std::size_t i = 0; i < weights.size(); ++i)
      comps.push_back({UnitVector(parse_vector(theta_list[i])), kappas[i]});
    sample = models::sample_mixture(n, models::vmf_mixture(weights, comps), rng);
    resolved << " weights=" << weights_s << " kappas=" << kappas_s;
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  io::write_dataset(out, sample);
  std::cout << resolved.str() << "\n" << "wrote " << sample.size() << " observations to "
            << out << "\n";
  return 0;
}

int cmd_transport(const std::string& in, const std::string& grid_spec, std::uint64_t seed,
                  const std::string& out) {
  const Sample sample = io::read_dataset(in);
  const auto shape = resolve_grid(grid_spec, static_cast<int>(sample.size()),
                                  sample.front().dim());
  const auto t = transport::fit(sample, shape.n_R, shape.n_S, shape.n_0, seed);
  io::write_text(out, io::transport_to_json(t));
  std::cout << "total_cost " << io::format_double(t.total_cost()) << "\npole";
  for (int k = 0; k < t.dim(); ++k) std::cout << ' ' << io::format_double(t.pole()[static_cast<std::size_t>(k)]);
  std::map<int, int> hist;
  for (int r : t.ranks()) hist[r]++;
  std::cout << "\nrank histogram:";
  for (const auto& [rank, count] : hist) std::cout << ' ' << rank << ':' << count;
  std::cout << "\nwrote " << out << "\n";
  return 0;
}

int cmd_contours(const std::string& transport_path, const std::string& ranks_s,
                 const std::string& out) {
  const auto t = io::transport_from_json(io::read_text(transport_path));
  std::vector<std::string> header;
  for (int k = 0; k < t.dim(); ++k) header.push_back("x" + std::to_string(k));
  header.push_back("rank");
  header.push_back("meridian_index");
  std::vector<std::vector<std::string>> rows;
  for (const double rank_d : parse_vector(ranks_s)) {
    const int rank = static_cast<int>(rank_d);
    if (rank < 1 || rank > t.grid().n_R())
      throw std::invalid_argument("contours: rank " + std::to_string(rank) + " out of range");
    for (int i = 0; i < t.size(); ++i) {
      if (t.ranks()[static_cast<std::size_t>(i)] != rank) continue;
      std::vector<std::string> row;
      for (int k = 0; k < t.dim(); ++k)
        row.push_back(io::format_double(t.sample()[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
      row.push_back(std::to_string(rank));
      row.push_back(std::to_string(t.grid().meridian_of(t.grid_index()[static_cast<std::size_t>(i)])));
      rows.push_back(std::move(row));
    }
  }
  io::write_csv(out, header, rows);
  std::cout << "wrote " << rows.size() << " contour points to " << out << "\n";
  return 0;
}

int cmd_test_unif(const std::string& in, double alpha, int n_mc, std::uint64_t seed,
                  unsigned threads, const std::string& out) {
  const Sample sample = io::read_dataset(in);
  const auto rep = gof::test_uniformity(sample, alpha, n_mc, seed, threads);
  emit_report(io::gof_report_to_json(rep), out);
  return 0;
}

int cmd_manova(const std::string& groups_s, const std::string& score, double alpha,
               const std::string& grid_spec, std::uint64_t seed, const std::string& out) {
  manova::PooledSample pooled;
  for (const auto& path : split(groups_s, ',')) pooled.groups.push_back(io::read_dataset(path));
  pooled.validate();
  if (score == "pvmf") {
    emit_report(io::manova_report_to_json(manova::pvmf_test(pooled, alpha)), out);
    return 0;
  }
  const auto shape = resolve_grid(grid_spec, pooled.total(), pooled.dim());
  const auto rep = manova::q_statistic(pooled, manova::score_from_name(score), shape.n_R,
                                       shape.n_S, shape.n_0, seed, alpha);
  emit_report(io::manova_report_to_json(rep), out);
  return 0;
}

int cmd_replicate(const std::string& target, const std::string& scale, std::uint64_t seed,
                  unsigned threads, const std::string& out) {
  const int n_reps = scale == "paper" ? 1000 : 200;
  if (scale != "paper" && scale != "desk")
    throw std::invalid_argument("scale must be 'desk' or 'paper'");
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (target == "table1" || target == "table2") {
    const bool one = target == "table1";
    const auto rates = experiments::gof_rejection_rates(
        one ? experiments::table1_dgps() : experiments::table2_dgps(), one ? 400 : 100,
        n_reps, 2000, seed, threads);
    header = {"dgp", "test", "rejection_rate", "n_reps", "seed"};
    for (const auto& r : rates)
      rows.push_back({r.dgp, r.test, io::format_double(r.rate), std::to_string(r.n_reps),
                      std::to_string(r.seed)});
  } else if (target.rfind("fig3-case", 0) == 0 && target.size() == 10) {
    const int case_id = target.back() - '0';
    const auto rates = experiments::manova_rejection_rates(
        case_id, experiments::manova_case_xis(case_id), n_reps, seed, threads);
    header = {"xi", "score", "rejection_rate", "n_reps", "seed"};
    for (const auto& r : rates)
      rows.push_back({io::format_double(r.xi), r.score, io::format_double(r.rate),
                      std::to_string(r.n_reps), std::to_string(r.seed)});
  } else {
    throw std::invalid_argument("unknown replicate target: " + target);
  }
  io::write_csv(out, header, rows);
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure-transportation tools for directional data"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a dataset from a model family");
  std::string family = "uniform", theta_s = "0,0,1", mu_s, weights_s, kappas_s, thetas_s;
  std::string sample_out = "sample.csv";
  int n = 100, d = 3;
  std::uint64_t seed = 0;
  double kappa = 0.0, beta_a = 1.0, beta_b = 1.0, lambda = 0.0, mu_angle = 0.0;
  sample->add_option("--family", family, "uniform|vmf|tangent_vmf|mixture|sine_skew");
  sample->add_option("--n", n, "observations")->required();
  sample->add_option("--d", d, "dimension (uniform only; otherwise from --theta)");
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--theta", theta_s, "location, comma separated");
  sample->add_option("--kappa", kappa, "concentration / skew intensity");
  sample->add_option("--mu", mu_s, "tangent-vMF skew direction, d-1 components");
  sample->add_option("--beta-a", beta_a, "tangent-vMF Beta a");
  sample->add_option("--beta-b", beta_b, "tangent-vMF Beta b");
  sample->add_option("--lambda", lambda, "sine-skew lambda");
  sample->add_option("--mu-angle", mu_angle, "sine-skew angular location");
  sample->add_option("--weights", weights_s, "mixture weights, comma separated");
  sample->add_option("--kappas", kappas_s, "mixture concentrations");
  sample->add_option("--thetas", thetas_s, "mixture locations, ';' separated");
  sample->add_option("--out", sample_out, "output CSV");

  // transport
  auto* tr = app.add_subcommand("transport", "Fit the empirical transport");
  std::string tr_in, tr_grid = "auto", tr_out = "transport.json";
  std::uint64_t tr_seed = 0;
  tr->add_option("--in", tr_in, "dataset CSV")->required();
  tr->add_option("--grid", tr_grid, "'auto' or nR,nS,n0");
  tr->add_option("--seed", tr_seed, "master seed");
  tr->add_option("--out", tr_out, "output JSON");

  // contours
  auto* co = app.add_subcommand("contours", "Export quantile contours as CSV");
  std::string co_tr, co_ranks = "5,20,29", co_out = "contours.csv";
  co->add_option("--transport", co_tr, "fitted transport JSON")->required();
  co->add_option("--ranks", co_ranks, "comma-separated rank list");
  co->add_option("--out", co_out, "output CSV");

  // test-unif
  auto* tu = app.add_subcommand("test-unif", "Monte Carlo calibrated uniformity test");
  std::string tu_in, tu_out, tu_config;
  double tu_alpha = 0.05;
  int tu_nmc = 2000;
  std::uint64_t tu_seed = 0;
  unsigned tu_threads = 0;
  tu->add_option("--in", tu_in, "dataset CSV")->required();
  tu->add_option("--alpha", tu_alpha, "level");
  tu->add_option("--n-mc", tu_nmc, "Monte Carlo replications");
  tu->add_option("--seed", tu_seed, "master seed");
  tu->add_option("--threads", tu_threads, "worker threads (0 = auto)");
  tu->add_option("--out", tu_out, "also write the report here");
  tu->add_option("--config", tu_config, "JSON run configuration");

  // manova
  auto* mv = app.add_subcommand("manova", "Rank-score MANOVA / pvMF test");
  std::string mv_groups, mv_score = "uniform", mv_grid = "auto", mv_out, mv_config;
  double mv_alpha = 0.05;
  std::uint64_t mv_seed = 0;
  mv->add_option("--groups", mv_groups, "comma-separated group CSVs")->required();
  mv->add_option("--score", mv_score,
                 "uniform|vmf-location|vmf-concentration|vmf-location-concentration|pvmf");
  mv->add_option("--alpha", mv_alpha, "level");
  mv->add_option("--grid", mv_grid, "'auto' or nR,nS,n0");
  mv->add_option("--seed", mv_seed, "master seed");
  mv->add_option("--out", mv_out, "also write the report here");
  mv->add_option("--config", mv_config, "JSON run configuration");

  // replicate
  auto* re = app.add_subcommand("replicate", "Rerun the simulation studies");
  std::string re_target, re_scale = "desk", re_out = "replicate.csv";
  std::uint64_t re_seed = 0;
  unsigned re_threads = 0;
  re->add_option("--target", re_target, "table1|table2|fig3-case1..fig3-case4")->required();
  re->add_option("--scale", re_scale, "desk (N=200) or paper (N=1000)");
  re->add_option("--seed", re_seed, "master seed");
  re->add_option("--threads", re_threads, "worker threads (0 = auto)");
  re->add_option("--out", re_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return cmd_sample(family, n, d, seed, theta_s, kappa, mu_s, beta_a, beta_b, lambda,
                        mu_angle, weights_s, kappas_s, thetas_s, sample_out);
    if (tr->parsed()) return cmd_transport(tr_in, tr_grid, tr_seed, tr_out);
    if (co->parsed()) return cmd_contours(co_tr, co_ranks, co_out);
    if (tu->parsed()) {
      if (!tu_config.empty()) {
        const auto cfg = load_config(tu_config);
        if (cfg.alpha && tu->count("--alpha") == 0) tu_alpha = *cfg.alpha;
        if (cfg.n_mc && tu->count("--n-mc") == 0) tu_nmc = *cfg.n_mc;
        if (cfg.seed && tu->count("--seed") == 0) tu_seed = *cfg.seed;
        if (cfg.out && tu->count("--out") == 0) tu_out = *cfg.out;
      }
      return cmd_test_unif(tu_in, tu_alpha, tu_nmc, tu_seed, tu_threads, tu_out);
    }
    if (mv->parsed()) {
      if (!mv_config.empty()) {
        const auto cfg = load_config(mv_config);
        if (cfg.alpha && mv->count("--alpha") == 0) mv_alpha = *cfg.alpha;
        if (cfg.seed && mv->count("--seed") == 0) mv_seed = *cfg.seed;
        if (cfg.grid && mv->count("--grid") == 0) mv_grid = *cfg.grid;
        if (cfg.score && mv->count("--score") == 0) mv_score = *cfg.score;
        if (cfg.out && mv->count("--out") == 0) mv_out = *cfg.out;
      }
      return cmd_manova(mv_groups, mv_score, mv_alpha, mv_grid, mv_seed, mv_out);
    }
    if (re->parsed()) return cmd_replicate(re_target, re_scale, re_seed, re_threads, re_out);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
