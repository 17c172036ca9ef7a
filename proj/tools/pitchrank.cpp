// Copyright 2026 The pitchrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pitchrank command-line interface.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pitchrank/config.hpp"
#include "pitchrank/corpus_stats.hpp"
#include "pitchrank/error.hpp"
#include "pitchrank/features.hpp"
#include "pitchrank/learning.hpp"
#include "pitchrank/numeric.hpp"
#include "pitchrank/pipeline.hpp"
#include "pitchrank/ranking.hpp"
#include "pitchrank/retrieval.hpp"
#include "pitchrank/roles.hpp"
#include "pitchrank/service.hpp"
#include "pitchrank/synthetic.hpp"
#include "pitchrank/text_io.hpp"

namespace pr = pitchrank;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pr::Error("io_error", "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw pr::Error("io_error", "cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <class F>
void emit(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
  } else {
    auto out = open_out(path);
    body(out);
  }
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void print_distribution(const char* name, const pr::Distribution& d) {
  std::cout << "  " << std::left << std::setw(26) << name << "n=" << d.count << " mean=" << fmt(d.mean)
            << " std=" << fmt(d.stddev) << " min=" << fmt(d.min) << " max=" << fmt(d.max) << "\n";
}

struct ModelArgs {
  std::string store;
  std::string bundle;
  std::vector<std::string> sets;
};

void add_model_args(CLI::App* app, ModelArgs& args) {
  app->add_option("--store", args.store, "Ingested store file")->required();
  app->add_option("--bundle", args.bundle, "Model bundle from `learn`")->required();
  app->add_option("--set", args.sets,
                  "Override an online setting: alpha, beta, delta_s, x_pct, min_matches");
}

struct Loaded {
  pr::EventStore store;
  pr::ModelBundle bundle;
  pr::Snapshot snapshot;
};

Loaded load_model(const ModelArgs& args) {
  Loaded l;
  l.store = pr::load_store(std::filesystem::path(args.store));
  l.bundle = pr::read_bundle(std::filesystem::path(args.bundle));
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw pr::Error("invalid_argument", "--set expects key=value");
    const auto key = std::string(pr::trim(kv.substr(0, eq)));
    const auto value = std::string(pr::trim(kv.substr(eq + 1)));
    if (key == "alpha") l.bundle.alpha = pr::parse_double(value, key);
    else if (key == "beta") l.bundle.beta = pr::parse_double(value, key);
    else if (key == "delta_s") l.bundle.delta_s = pr::parse_double(value, key);
    else if (key == "x_pct") l.bundle.x_pct = pr::parse_double(value, key);
    else if (key == "min_matches") l.bundle.min_matches = static_cast<std::size_t>(pr::parse_int(value, key));
    else throw pr::SchemaError(key, "not an online setting");
  }
  l.bundle.rating_config();
  l.snapshot = pr::build_snapshot(l.store, l.bundle);
  return l;
}

pr::PipelineConfig make_config(const std::string& path, const std::vector<std::string>& sets) {
  pr::PipelineConfig config = path.empty() ? pr::PipelineConfig{} : pr::read_config(std::filesystem::path(path));
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw pr::Error("invalid_argument", "--set expects key=value");
    config.set(std::string(pr::trim(kv.substr(0, eq))), std::string(pr::trim(kv.substr(eq + 1))));
  }
  config.validate();
  return config;
}

void print_learning(const pr::ModelBundle& b) {
  std::cout << "classifier  holdout auc=" << fmt(b.holdout.auc) << " f1=" << fmt(b.holdout.f1)
            << " accuracy=" << fmt(b.holdout.accuracy) << " examples=" << b.holdout.examples
            << " cost=" << b.weights.cost << "\n";
  std::cout << "roles       k=" << b.roles.k << " silhouette=" << fmt(b.roles.silhouette) << "\n";
  for (int i = 0; i < b.roles.k; ++i) {
    const auto& c = b.roles.centroids[static_cast<std::size_t>(i)];
    std::cout << "  role " << i << "  center=(" << fmt(c.x, 1) << ", " << fmt(c.y, 1) << ")\n";
  }
  std::cout << "bundle digest " << pr::hex64(b.digest()) << "\n";
}

void print_top(const pr::Snapshot& snap, std::size_t limit) {
  for (const auto& ranking : snap.rankings) {
    std::cout << "role " << ranking.role << " (" << ranking.entries.size() << " players)\n";
    for (std::size_t i = 0; i < std::min(limit, ranking.entries.size()); ++i) {
      const auto& e = ranking.entries[i];
      std::cout << "  " << std::setw(3) << i + 1 << "  " << std::left << std::setw(16)
                << snap.profiles.at(e.player_id).name << std::right << " r_bar=" << fmt(e.r_bar)
                << " matches=" << e.matches << "\n";
    }
  }
}

std::vector<int> parse_zone_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : pr::split(text, ',')) {
    const auto t = pr::trim(part);
    if (t.empty()) continue;
    const auto dash = t.find('-');
    if (dash != std::string_view::npos && dash > 0) {
      const auto lo = pr::parse_int(t.substr(0, dash), "zone");
      const auto hi = pr::parse_int(t.substr(dash + 1), "zone");
      for (auto z = lo; z <= hi; ++z) out.push_back(static_cast<int>(z));
    } else {
      out.push_back(static_cast<int>(pr::parse_int(t, "zone")));
    }
  }
  return out;
}

pr::ScoutServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pitchrank: data-driven player ratings, role rankings and spatial search"};
  app.require_subcommand(1);

  // ingest
  pr::CorpusPaths paths;
  std::string ingest_out;
  pr::LoadOptions load_options;
  auto* ingest = app.add_subcommand("ingest", "Load a soccer-log corpus into a store file");
  ingest->add_option("--events", paths.events, "Events (JSON array or JSON lines)")->required();
  ingest->add_option("--matches", paths.matches, "Matches")->required();
  ingest->add_option("--players", paths.players, "Players")->required();
  ingest->add_option("--competitions", paths.competitions, "Competitions");
  ingest->add_flag("--keep-goalkeepers", load_options.keep_goalkeepers, "Keep goalkeeper events");
  ingest->add_flag("--strict", load_options.strict, "Reject events without a position");
  ingest->add_option("--out", ingest_out, "Store file to write")->required();

  // features
  std::string feat_store, feat_out, feat_norm_out, feat_norm_in;
  bool feat_normalized = false;
  auto* features_group = app.add_subcommand("features", "Per player-match feature vectors");
  features_group->require_subcommand(1);
  auto* features = features_group->add_subcommand("extract", "Extract feature vectors from a store");
  features->add_option("--store", feat_store, "Store file")->required();
  features->add_option("--out", feat_out, "Vectors file (TSV); '-' for stdout");
  features->add_option("--normalization-out", feat_norm_out, "Write fitted min-max bounds");
  features->add_option("--normalization", feat_norm_in, "Use these bounds instead of fitting");
  features->add_flag("--normalized", feat_normalized, "Write normalized instead of raw counts");

  // train
  std::string train_store, train_vectors, train_out, train_scope = "all", train_config;
  std::vector<std::string> train_sets;
  auto* train = app.add_subcommand("train", "Learn feature weights from match outcomes");
  train->add_option("--store", train_store, "Store file")->required();
  train->add_option("--vectors", train_vectors, "Raw vectors from `features extract` (default: extract)");
  train->add_option("--out", train_out, "Weights file (per-scope files get a suffix)")->required();
  train->add_option("--scope", train_scope, "all, competition or role")
      ->check(CLI::IsMember({"all", "competition", "role"}));
  train->add_option("--config", train_config, "Pipeline configuration file");
  train->add_option("--set", train_sets, "Override a configuration key (key=value)");

  // nrmse
  std::string nrmse_base, nrmse_other;
  auto* nrmse = app.add_subcommand("nrmse", "Range-normalized RMS difference of two weight files");
  nrmse->add_option("base", nrmse_base, "Reference weights")->required();
  nrmse->add_option("other", nrmse_other, "Compared weights")->required();

  // roles
  auto* roles = app.add_subcommand("roles", "Centers of performance and the role model");
  roles->require_subcommand(1);
  std::string centers_store, centers_out;
  std::size_t centers_min_events = 3;
  auto* roles_centers = roles->add_subcommand("centers", "Compute centers of performance");
  roles_centers->add_option("--store", centers_store, "Store file")->required();
  roles_centers->add_option("--out", centers_out, "Centers file (TSV)");
  roles_centers->add_option("--min-events", centers_min_events, "Minimum events per player-match");
  std::string fit_centers, fit_out;
  pr::RoleFitConfig fit_config;
  double fit_delta = 0.1;
  auto* roles_fit = roles->add_subcommand("fit", "Fit the k-means role model");
  roles_fit->add_option("--centers", fit_centers, "Centers file")->required();
  roles_fit->add_option("--kmin", fit_config.k_min, "Smallest k")->capture_default_str();
  roles_fit->add_option("--kmax", fit_config.k_max, "Largest k")->capture_default_str();
  roles_fit->add_option("--restarts", fit_config.restarts, "Restarts per k")->capture_default_str();
  roles_fit->add_option("--seed", fit_config.seed, "Seed")->capture_default_str();
  roles_fit->add_option("--delta", fit_delta, "Hybrid threshold stored with the model");
  roles_fit->add_option("--out", fit_out, "Role model file")->required();
  std::string assign_model, assign_centers, assign_out;
  double assign_delta = -1.0;
  auto* roles_assign = roles->add_subcommand("assign", "Soft role assignment of centers");
  roles_assign->add_option("--model", assign_model, "Role model file")->required();
  roles_assign->add_option("--centers", assign_centers, "Centers file")->required();
  roles_assign->add_option("--delta", assign_delta, "Hybrid threshold (default: the model's)");
  roles_assign->add_option("--out", assign_out, "Assignments file (TSV)");

  // learn
  std::string learn_store, learn_config, learn_out;
  std::vector<std::string> learn_sets;
  auto* learn = app.add_subcommand("learn", "Run the offline learning phase into a model bundle");
  learn->add_option("--store", learn_store, "Store file")->required();
  learn->add_option("--config", learn_config, "Pipeline configuration file");
  learn->add_option("--set", learn_sets, "Override a configuration key (key=value)");
  learn->add_option("--out", learn_out, "Bundle file")->required();

  // rate
  ModelArgs rate_args;
  std::string rate_out;
  auto* rate = app.add_subcommand("rate", "Rate every player-match and export the series");
  add_model_args(rate, rate_args);
  rate->add_option("--out", rate_out, "Ratings file (TSV); '-' for stdout");

  // rank
  ModelArgs rank_args;
  int rank_role = -1;
  std::size_t rank_limit = 0;
  std::string rank_out;
  auto* rank = app.add_subcommand("rank", "Print role-based rankings");
  add_model_args(rank, rank_args);
  rank->add_option("--role", rank_role, "Role index (default: all roles)");
  rank->add_option("--limit", rank_limit, "Rows per ranking (0 = all)");
  rank->add_option("--out", rank_out, "Ranking file (TSV, needs --role)");

  // search
  ModelArgs search_args;
  std::string search_zones, search_query;
  std::size_t search_top = 10;
  auto* search = app.add_subcommand("search", "Spatial player search");
  add_model_args(search, search_args);
  search->add_option("--zones", search_zones, "Zone indices, e.g. 7,8,17-19");
  search->add_option("--query", search_query, "Query JSON file");
  search->add_option("--top-k", search_top, "Results to print");

  // versatility
  ModelArgs vers_args;
  std::int64_t vers_player = 0;
  std::size_t vers_limit = 20;
  auto* vers = app.add_subcommand("versatility", "Role entropy of players");
  add_model_args(vers, vers_args);
  vers->add_option("--player", vers_player, "Single player id");
  vers->add_option("--limit", vers_limit, "Most versatile players to print");

  // stats
  ModelArgs stats_args;
  std::string stats_alphas;
  auto* stats = app.add_subcommand("stats", "Rating distribution and excellence analysis");
  add_model_args(stats, stats_args);
  stats->add_option("--alphas", stats_alphas, "Goal weights for the correlation sweep, e.g. 0,0.25,0.5");

  // concordance
  ModelArgs conc_args;
  std::string conc_pairs;
  int conc_role = -1;
  auto* conc = app.add_subcommand("concordance", "Agreement with expert pairwise judgments");
  add_model_args(conc, conc_args);
  conc->add_option("--pairs", conc_pairs, "Expert pairs file")->required();
  conc->add_option("--role", conc_role, "Use one role ranking instead of the overall ranking");

  // serve
  ModelArgs serve_args;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  add_model_args(serve, serve_args);
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve->add_option("--port", serve_port, "Port (0 = any free port)")->capture_default_str();

  // generate
  pr::SyntheticConfig gen_config;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus");
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--matches", gen_config.matches, "Matches")->capture_default_str();
  generate->add_option("--seed", gen_config.seed, "Seed")->capture_default_str();

  // demo
  pr::SyntheticConfig demo_config;
  demo_config.matches = 400;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo", "Run the whole pipeline on a synthetic corpus");
  demo->add_option("--matches", demo_config.matches, "Matches")->capture_default_str();
  demo->add_option("--seed", demo_config.seed, "Seed")->capture_default_str();
  demo->add_option("--out", demo_out, "Directory for the corpus, store, bundle and exports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      pr::LoadReport report;
      const auto store = pr::load_corpus(paths, load_options, &report);
      pr::save_store(store, std::filesystem::path(ingest_out));
      std::cout << "events read " << report.events_read << ", kept " << store.events().size()
                << ", missing position " << report.dropped_missing_position << ", unsupported "
                << report.skipped_unsupported << ", goalkeeper " << report.goalkeeper_events_removed
                << "\n";
      const auto cs = pr::corpus_stats(store);
      std::cout << "matches " << cs.matches << ", player-matches " << cs.player_matches << "\n";
      print_distribution("events per match", cs.events_per_match);
      print_distribution("events per player-match", cs.events_per_player_match);
      print_distribution("inter-event time (s)", cs.inter_event_time);
    } else if (*features) {
      const auto store = pr::load_store(std::filesystem::path(feat_store));
      const auto& catalog = pr::default_catalog();
      auto vectors = pr::extract_all(store, catalog);
      pr::NormalizationParams params;
      if (!feat_norm_in.empty()) {
        auto in = open_in(feat_norm_in);
        params = pr::read_normalization(in, catalog);
      } else {
        params = pr::fit_normalization(vectors, catalog);
      }
      if (!feat_norm_out.empty()) {
        auto out = open_out(feat_norm_out);
        pr::write_normalization(params, catalog, out);
      }
      if (feat_normalized) {
        for (auto& v : vectors) v = pr::apply_normalization(v, params);
      }
      emit(feat_out, [&](std::ostream& out) { pr::write_vectors(vectors, catalog, out); });
      std::cerr << vectors.size() << " vectors, " << catalog.size() << " features\n";
    } else if (*train) {
      const auto config = make_config(train_config, train_sets);
      const auto store = pr::load_store(std::filesystem::path(train_store));
      const auto& catalog = pr::default_catalog();
      std::vector<pr::PerformanceVector> vectors;
      if (train_vectors.empty()) {
        vectors = pr::extract_all(store, catalog);
      } else {
        auto in = open_in(train_vectors);
        vectors = pr::read_vectors(in, catalog);
      }
      pr::TrainConfig tc;
      tc.cost_grid = config.cost_grid;
      tc.folds = config.folds;
      tc.holdout = config.holdout;
      tc.seed = config.seed;
      pr::ScopeKind scope = train_scope == "all"           ? pr::ScopeKind::all
                            : train_scope == "competition" ? pr::ScopeKind::competition
                                                           : pr::ScopeKind::role;
      std::vector<pr::TrainingExample> examples;
      if (scope == pr::ScopeKind::role) {
        const auto centers = pr::compute_centers(store, config.min_events_for_role);
        std::vector<pr::Point> points;
        for (const auto& c : centers) points.push_back(c.center);
        pr::RoleFitConfig rc;
        rc.k_min = config.k_min;
        rc.k_max = config.k_max;
        rc.restarts = config.restarts;
        rc.seed = config.seed;
        const auto model = pr::fit_roles(points, rc);
        std::map<std::pair<std::int64_t, std::int64_t>, int> primary;
        for (const auto& c : centers) primary[{c.player_id, c.match_id}] = model.nearest(c.center);
        examples = pr::build_role_training_set(store, vectors, primary, catalog).examples;
      } else {
        const auto teams = pr::aggregate_teams(store, vectors);
        examples = pr::build_training_set(store, teams, catalog).examples;
      }
      const auto scoped = pr::train_scoped_weights(examples, scope, tc, catalog.hash());
      for (const auto& w : scoped.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& m : scoped.models) {
        std::string path = train_out;
        if (scope != pr::ScopeKind::all) {
          std::string suffix = m.weights.scope;
          std::replace(suffix.begin(), suffix.end(), ':', '-');
          path += "." + suffix;
        }
        auto out = open_out(path);
        pr::write_weights(m.weights, catalog, out);
        std::cout << m.weights.scope << "  auc=" << fmt(m.report.holdout.auc)
                  << " f1=" << fmt(m.report.holdout.f1) << " accuracy=" << fmt(m.report.holdout.accuracy)
                  << " cost=" << m.report.selected_cost << " train=" << m.report.train_size
                  << " holdout=" << m.report.holdout.examples << "  -> " << path << "\n";
      }
    } else if (*nrmse) {
      const auto& catalog = pr::default_catalog();
      auto a = open_in(nrmse_base);
      auto b = open_in(nrmse_other);
      const auto wa = pr::read_weights(a, catalog);
      const auto wb = pr::read_weights(b, catalog);
      std::cout << fmt(pr::compute_nrmse(wa, wb), 6) << "\n";
    } else if (*roles_centers) {
      const auto store = pr::load_store(std::filesystem::path(centers_store));
      const auto centers = pr::compute_centers(store, centers_min_events);
      emit(centers_out, [&](std::ostream& out) {
        out << "player_id\tmatch_id\tx\ty\tevents\n";
        for (const auto& c : centers) {
          out << c.player_id << '\t' << c.match_id << '\t' << pr::format_double(c.center.x) << '\t'
              << pr::format_double(c.center.y) << '\t' << c.event_count << '\n';
        }
      });
    } else if (*roles_fit || *roles_assign) {
      auto read_centers = [](const std::string& path) {
        auto in = open_in(path);
        std::vector<pr::CenterOfPerformance> out;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
          const auto f = pr::split_ws(line);
          if (f.empty()) continue;
          if (f.size() != 5) throw pr::ValidationError("centers file needs 5 columns");
          pr::CenterOfPerformance c;
          c.player_id = pr::parse_int(f[0], "player_id");
          c.match_id = pr::parse_int(f[1], "match_id");
          c.center = {pr::parse_double(f[2], "x"), pr::parse_double(f[3], "y")};
          c.event_count = static_cast<std::size_t>(pr::parse_int(f[4], "events"));
          out.push_back(c);
        }
        return out;
      };
      if (*roles_fit) {
        const auto centers = read_centers(fit_centers);
        std::vector<pr::Point> points;
        for (const auto& c : centers) points.push_back(c.center);
        const auto model = pr::fit_roles(points, fit_config);
        auto out = open_out(fit_out);
        pr::write_role_model(model, fit_delta, out);
        for (const auto& [k, ss] : model.sweep) std::cout << "k=" << k << " silhouette=" << fmt(ss) << "\n";
        std::cout << "selected k=" << model.k << " silhouette=" << fmt(model.silhouette) << "\n";
      } else {
        auto in = open_in(assign_model);
        double stored_delta = 0.1;
        const auto model = pr::read_role_model(in, &stored_delta);
        const double delta = assign_delta >= 0.0 ? assign_delta : stored_delta;
        const auto centers = read_centers(assign_centers);
        std::size_t hybrids = 0;
        emit(assign_out, [&](std::ostream& out) {
          out << "player_id\tmatch_id\tprimary\thybrids\n";
          for (const auto& c : centers) {
            const auto a = pr::soft_assign(c.center, model, delta);
            if (!a.hybrids.empty()) ++hybrids;
            out << c.player_id << '\t' << c.match_id << '\t' << a.primary << '\t';
            if (a.hybrids.empty()) out << '-';
            for (std::size_t i = 0; i < a.hybrids.size(); ++i) out << (i ? "," : "") << a.hybrids[i];
            out << '\n';
          }
        });
        std::cerr << hybrids << " of " << centers.size() << " centers are hybrid at delta " << delta << "\n";
      }
    } else if (*learn) {
      const auto config = make_config(learn_config, learn_sets);
      const auto store = pr::load_store(std::filesystem::path(learn_store));
      const auto bundle = pr::run_learning_phase(store, config);
      pr::write_bundle(bundle, std::filesystem::path(learn_out));
      print_learning(bundle);
    } else if (*rate) {
      const auto l = load_model(rate_args);
      emit(rate_out, [&](std::ostream& out) { pr::write_ratings(l.snapshot, out); });
    } else if (*rank) {
      const auto l = load_model(rank_args);
      if (rank_role >= 0) {
        if (rank_role >= static_cast<int>(l.snapshot.rankings.size())) {
          throw pr::Error("not_found", "no role " + std::to_string(rank_role));
        }
        auto ranking = l.snapshot.rankings[static_cast<std::size_t>(rank_role)];
        if (rank_limit > 0 && ranking.entries.size() > rank_limit) ranking.entries.resize(rank_limit);
        emit(rank_out, [&](std::ostream& out) { pr::write_ranking(ranking, l.snapshot, out); });
      } else {
        print_top(l.snapshot, rank_limit > 0 ? rank_limit : 10);
      }
    } else if (*search) {
      const auto l = load_model(search_args);
      pr::ZoneQuery query;
      if (!search_query.empty()) {
        auto in = open_in(search_query);
        query = pr::parse_zone_query(nlohmann::json::parse(in), l.bundle.grid);
      } else if (!search_zones.empty()) {
        query = pr::binary_query(l.bundle.grid, parse_zone_list(search_zones), search_top);
      } else {
        throw pr::Error("invalid_argument", "give --zones or --query");
      }
      if (search->count("--top-k")) query.top_k = search_top;
      const auto candidates = l.snapshot.candidates(l.bundle.min_matches);
      const auto result = pr::search(query, candidates);
      std::cout << "rank  player_id  name              z       s       r_bar\n";
      for (std::size_t i = 0; i < result.hits.size(); ++i) {
        const auto& h = result.hits[i];
        std::cout << std::setw(4) << i + 1 << "  " << std::setw(9) << h.player_id << "  " << std::left
                  << std::setw(16) << l.snapshot.profiles.at(h.player_id).name << std::right << "  "
                  << fmt(h.z) << "  " << fmt(h.s) << "  " << fmt(h.r_bar) << "\n";
      }
    } else if (*vers) {
      const auto l = load_model(vers_args);
      const int k = l.bundle.roles.k;
      std::vector<pr::VersatilityScore> scores;
      for (const auto& [player, s] : l.snapshot.series) {
        if (vers_player != 0 && player != vers_player) continue;
        if (vers_player == 0 && s.size() < l.bundle.min_matches) continue;
        const auto history = pr::role_history(s);
        if (history.empty()) continue;
        scores.push_back(pr::versatility(history, k, player));
      }
      if (vers_player != 0 && scores.empty()) {
        throw pr::Error("not_found", "player " + std::to_string(vers_player) + " has no role history");
      }
      std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        return a.value != b.value ? a.value > b.value : a.player_id < b.player_id;
      });
      if (scores.size() > vers_limit && vers_player == 0) scores.resize(vers_limit);
      for (const auto& v : scores) {
        std::cout << v.player_id << '\t' << fmt(v.value);
        for (double p : v.frequencies) std::cout << '\t' << fmt(p, 3);
        std::cout << '\n';
      }
    } else if (*stats) {
      const auto l = load_model(stats_args);
      const auto st = pr::rating_stats(l.snapshot.ratings());
      std::cout << "ratings " << st.count << "  mean=" << fmt(st.mean) << " std=" << fmt(st.stddev)
                << "\nexcellence threshold (mean+2std) " << fmt(st.excellence_threshold) << "\n"
                << "excellent " << st.excellent << " (" << fmt(100.0 * st.excellent / st.count, 2)
                << "%), within band " << st.within_band << " ("
                << fmt(100.0 * st.within_band / st.count, 2) << "%)\n";
      if (st.mean_std_correlation) {
        std::cout << "pearson(player mean, player std) " << fmt(*st.mean_std_correlation) << "\n";
      }
      if (!stats_alphas.empty()) {
        std::vector<double> alphas;
        for (const auto& part : pr::split(stats_alphas, ',')) alphas.push_back(pr::parse_double(pr::trim(part), "alpha"));
        for (const auto& row : pr::alpha_sweep_correlation(l.snapshot.series, alphas, l.bundle.rating_config())) {
          std::cout << "alpha " << fmt(row.alpha, 2) << "  overall "
                    << (row.overall ? fmt(*row.overall) : std::string("undefined"));
          for (const auto& [role, c] : row.per_role) {
            std::cout << "  role" << role << " " << (c ? fmt(*c, 3) : std::string("-"));
          }
          std::cout << "\n";
        }
      }
    } else if (*conc) {
      const auto l = load_model(conc_args);
      auto in = open_in(conc_pairs);
      const auto pairs = pr::read_expert_pairs(in);
      std::map<std::int64_t, std::size_t> positions;
      if (conc_role >= 0) {
        if (conc_role >= static_cast<int>(l.snapshot.rankings.size())) {
          throw pr::Error("not_found", "no role " + std::to_string(conc_role));
        }
        const auto& entries = l.snapshot.rankings[static_cast<std::size_t>(conc_role)].entries;
        for (std::size_t i = 0; i < entries.size(); ++i) positions[entries[i].player_id] = i + 1;
      } else {
        positions = l.snapshot.overall_positions(l.bundle.rating_config());
      }
      const auto report = pr::concordance(pairs, positions);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "pairs evaluated " << report.evaluated << ", discarded " << report.discarded
                << ", skipped " << report.skipped << "\nc_maj " << fmt(report.c_maj) << "\nc_una "
                << (report.c_una ? fmt(*report.c_una) : std::string("undefined")) << " ("
                << report.unanimous << " unanimous)\n";
      for (const auto& b : report.buckets) {
        std::cout << "distance [" << b.min_distance << ", "
                  << (b.max_distance ? std::to_string(*b.max_distance) : std::string("inf")) << "]  n="
                  << b.evaluated << "  concordance " << (b.rate() ? fmt(*b.rate()) : std::string("-"))
                  << "\n";
      }
    } else if (*serve) {
      auto l = load_model(serve_args);
      auto bundle = std::make_shared<const pr::ModelBundle>(std::move(l.bundle));
      auto snapshot = std::make_shared<const pr::Snapshot>(std::move(l.snapshot));
      pr::ScoutApi api(bundle, snapshot);
      pr::ScoutServer server(api);
      const int port = server.start(serve_host, serve_port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << serve_host << ":" << port << std::endl;
      server.wait();
      g_server = nullptr;
    } else if (*generate) {
      const auto corpus = pr::generate_corpus(gen_config);
      pr::write_corpus(corpus, gen_out);
      std::cout << corpus.events.size() << " events, " << corpus.matches.size() << " matches, "
                << corpus.players.size() << " players written to " << gen_out << "\n";
    } else if (*demo) {
      const auto corpus = pr::generate_corpus(demo_config);
      const auto store = corpus.store();
      pr::PipelineConfig config;
      config.k_max = 12;
      config.restarts = 4;
      const auto bundle = pr::run_learning_phase(store, config);
      const auto snapshot = pr::build_snapshot(store, bundle);
      std::cout << "synthetic corpus: " << store.events().size() << " events, " << store.matches().size()
                << " matches, " << store.players().size() << " players\n";
      print_learning(bundle);
      std::cout << "weights vs planted model: spearman "
                << fmt(pr::spearman(bundle.weights.weights, corpus.planted_weights).value_or(0.0)) << "\n";
      print_top(snapshot, 5);
      if (!demo_out.empty()) {
        const std::filesystem::path dir(demo_out);
        pr::write_corpus(corpus, dir / "corpus");
        pr::save_store(store, dir / "store.json");
        pr::write_bundle(bundle, dir / "bundle.txt");
        auto out = open_out((dir / "ratings.tsv").string());
        pr::write_ratings(snapshot, out);
        std::cout << "wrote corpus, store.json, bundle.txt and ratings.tsv to " << dir.string() << "\n";
      }
    }
  } catch (const pr::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
