#pragma once

// Command-line front end: train, eval, analyze, verify and gen-toy.
//
// Options may also come from a flat key=value file (--config); flags given on
// the command line win. Every run writes manifest.txt into its output
// directory, and that file is itself a valid --config. HGE_OUT_DIR sets the
// default output directory.
//
// Exit codes: 0 success, 1 runtime failure (or failed verification), 2 bad
// flags or option values.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hge/checkpoint.hpp"
#include "hge/data.hpp"
#include "hge/errors.hpp"
#include "hge/eval.hpp"
#include "hge/model.hpp"
#include "hge/patterns.hpp"
#include "hge/toy.hpp"
#include "hge/training.hpp"
#include "hge/verifier.hpp"

namespace hge::cli {

inline constexpr const char* kCodeVersion = "hge-1.0.0";

struct RunConfig {
  std::string command;
  std::string data;
  bool interval = false;
  std::string variant = "hge";
  std::size_t dim = 32;
  std::size_t epochs = 200;
  double lr = 0.1;
  double lambda = 0.0;
  double smoothing = 0.0;
  std::size_t batch_size = 1000;
  std::size_t valid_every = 0;
  bool unconjugated = false;
  double init_scale = 1e-2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string checkpoint;
  std::string out;
  std::string split = "test";
  std::string sides = "both";
  bool per_query = false;
  std::size_t star_size = 3;
  bool reduce_intervals = false;
  std::uint64_t toy_seed = 2024;
  std::size_t toy_entities = 40;
  std::size_t toy_times = 20;
};

namespace detail {

inline std::string default_out_dir() {
  if (const char* env = std::getenv("HGE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "hge_out";
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines; blank lines and '#' comments skipped.
inline std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Keys written to manifests that are not options.
inline const std::set<std::string>& manifest_only_keys() {
  static const std::set<std::string> keys{"command", "code_version"};
  return keys;
}

inline std::vector<std::string> config_arguments(const std::string& path, const CLI::App& sub) {
  std::vector<std::string> args;
  for (const auto& [key, value] : read_flat_config(path)) {
    if (manifest_only_keys().count(key) != 0) continue;
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw ConfigError("unknown config key '" + key + "'");
    if (opt->get_items_expected_max() == 0) {
      if (value == "true" || value == "1") args.push_back("--" + key);
      else if (value != "false" && value != "0") throw ConfigError("flag '" + key + "' needs true or false");
    } else if (!value.empty()) {
      // An empty value means the option was left at its (empty) default.
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

inline void write_manifest(const std::filesystem::path& dir, const CLI::App& sub, const std::string& command) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "manifest.txt");
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << "command=" << command << "\ncode_version=" << kCodeVersion << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_items_expected_max() == 0) {
      out << name << '=' << (opt->count() > 0 ? "true" : "false") << '\n';
    } else {
      const auto& res = opt->results();
      out << name << '=' << (res.empty() ? opt->get_default_str() : res.back()) << '\n';
    }
  }
}

inline Dataset load_data(const RunConfig& rc) {
  if (rc.data.empty()) throw ConfigError("--data is required");
  return rc.interval ? load_interval(rc.data) : load_pointwise(rc.data);
}

inline Split parse_split(const std::string& s) {
  for (Split sp : kAllSplits) {
    if (split_name(sp) == s) return sp;
  }
  throw ConfigError("split must be train, valid or test");
}

inline std::filesystem::path out_dir(const RunConfig& rc) {
  return rc.out.empty() ? std::filesystem::path(default_out_dir()) : std::filesystem::path(rc.out);
}

inline TrainConfig train_config(const RunConfig& rc) {
  TrainConfig tc;
  tc.learning_rate = rc.lr;
  tc.epochs = rc.epochs;
  tc.batch_size = rc.batch_size;
  tc.reg.embedding = rc.lambda;
  tc.reg.temporal = rc.smoothing;
  tc.dim = rc.dim;
  tc.seed = rc.seed;
  tc.variant = parse_variant(rc.variant);
  tc.conjugate_object = !rc.unconjugated;
  tc.init_scale = rc.init_scale;
  tc.valid_every = rc.valid_every;
  tc.validate();
  return tc;
}

inline int do_train(const RunConfig& rc, const CLI::App& sub, std::ostream& out) {
  const TrainConfig tc = train_config(rc);
  const Dataset ds = load_data(rc);
  const auto dir = out_dir(rc);
  std::filesystem::create_directories(dir);
  ModelState m = make_model(ds, tc);

  Validator validator;
  if (!ds.valid.empty()) {
    const FilterIndex filter = FilterIndex::from_dataset(ds);
    const auto queries = evaluation_queries(ds, Split::Valid, rc.seed);
    validator = [filter, queries, threads = rc.threads](const ModelState& model) {
      return evaluate(model, queries, filter, SideSelection::Both, threads).mrr;
    };
  }
  const auto trace = fit(m, ds, tc, validator);

  const std::filesystem::path ckpt = rc.checkpoint.empty() ? dir / "model.ckpt" : std::filesystem::path(rc.checkpoint);
  save_checkpoint(ckpt.string(), m);
  std::ofstream csv(dir / "loss_trace.csv");
  csv << "epoch,train_loss,valid_MRR\n";
  csv.precision(17);
  for (const EpochRecord& r : trace) {
    csv << r.epoch << ',' << r.train_loss << ',';
    if (r.valid_mrr) csv << *r.valid_mrr;
    csv << '\n';
  }
  std::ofstream(dir / "stats.json") << stats_json(ds.stats()).dump(2) << '\n';
  write_manifest(dir, sub, "train");
  out << "trained " << variant_name(tc.variant) << " d=" << tc.dim << " for " << tc.epochs << " epochs; final loss "
      << (trace.empty() ? 0.0 : trace.back().train_loss);
  if (!trace.empty() && trace.back().valid_mrr) out << ", valid MRR " << *trace.back().valid_mrr;
  out << "\ncheckpoint: " << ckpt.string() << '\n';
  return 0;
}

inline int do_eval(const RunConfig& rc, const CLI::App& sub, std::ostream& out) {
  if (rc.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  const Split split = parse_split(rc.split);
  const SideSelection sides = parse_sides(rc.sides);
  const Dataset ds = load_data(rc);
  const ModelState m = load_checkpoint(rc.checkpoint);
  if (m.config().entities != ds.entities.size() || m.config().relations != ds.relations.size() ||
      m.config().times != ds.times.size()) {
    throw DataError("checkpoint does not match the dataset vocabulary");
  }
  const FilterIndex filter = FilterIndex::from_dataset(ds);
  const RankingReport report = evaluate(m, evaluation_queries(ds, split, rc.seed), filter, sides, rc.threads);
  const auto dir = out_dir(rc);
  std::filesystem::create_directories(dir);
  nlohmann::json j = report_json(report, &ds, rc.per_query);
  j["split"] = rc.split;
  j["variant"] = std::string(variant_name(m.variant()));
  std::ofstream(dir / "report.json") << j.dump(2) << '\n';
  write_manifest(dir, sub, "eval");
  out << report.summary() << '\n';
  return 0;
}

inline std::string file_stem(const std::string& kind_name) {
  std::string s;
  for (char c : kind_name) {
    if (std::isalnum(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!s.empty() && s.back() != '_') s += '_';
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

inline int do_analyze(const RunConfig& rc, const CLI::App& sub, std::ostream& out) {
  const Dataset ds = load_data(rc);
  PatternOptions opt;
  opt.star_size = rc.star_size;
  opt.reduce_intervals = rc.reduce_intervals;
  if (opt.star_size == 0) throw ConfigError("--star-size must be positive");
  const PatternCensus census = pattern_census(ds, opt);
  const auto dir = out_dir(rc);
  std::filesystem::create_directories(dir);
  const std::string csv = census_csv(census, &ds);
  std::ofstream(dir / "census.csv") << csv;
  out << csv;
  for (PatternKind k : {PatternKind::StaticSymmetric, PatternKind::TemporalHierarchy, PatternKind::TemporalStar}) {
    const auto subset = extract_subset(ds, k, opt);
    const std::string name = "subset_" + file_stem(pattern_name(k, opt.star_size)) + ".txt";
    write_subset((dir / name).string(), subset, ds);
    out << name << ": " << subset.size() << " test facts\n";
  }
  write_manifest(dir, sub, "analyze");
  return 0;
}

inline int do_verify(const RunConfig& rc, const CLI::App& sub, std::ostream& out) {
  const auto rows = run_verifier();
  out << verifier_table(rows);
  const bool ok = all_pass(rows);
  out << (ok ? "all proposition cases pass\n" : "some proposition cases FAILED\n");
  if (!rc.out.empty()) write_manifest(rc.out, sub, "verify");
  return ok ? 0 : 1;
}

inline int do_gen_toy(const RunConfig& rc, const CLI::App& sub, std::ostream& out) {
  ToyConfig tc;
  tc.seed = rc.toy_seed;
  tc.entities = rc.toy_entities;
  tc.times = rc.toy_times;
  const Dataset ds = generate_toy(tc);
  const auto dir = out_dir(rc);
  write_dataset(dir, ds);
  write_manifest(dir, sub, "gen-toy");
  const DatasetStats st = ds.stats();
  out << "wrote " << dir.string() << ": " << st.entities << " entities, " << st.relations << " relations, " << st.times
      << " times, " << st.train << "/" << st.valid << "/" << st.test << " facts\n";
  return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig rc;
  CLI::App app{"Hypercomplex geometric temporal knowledge graph embeddings"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_common = [&](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--config", "flat key=value file with option values");
    sub->add_option("--seed", seed, "random seed")->capture_default_str();
    sub->add_option("--out", rc.out, "output directory (default $HGE_OUT_DIR or hge_out)");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", rc.data, "dataset directory with train/valid/test files")->required();
    sub->add_flag("--interval", rc.interval, "five-column interval dataset");
    sub->add_option("--threads", rc.threads, "worker threads for ranking")->capture_default_str()->check(
        CLI::PositiveNumber);
  };

  CLI::App* train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_common(train, rc.seed);
  add_data(train);
  train->add_option("--variant", rc.variant, "hge, tra, tga, stack, complex, split, dual, tcomplex, tntcomplex")
      ->capture_default_str();
  train->add_option("--dim", rc.dim, "embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--epochs", rc.epochs, "training epochs")->capture_default_str();
  train->add_option("--lr", rc.lr, "Adagrad learning rate")->capture_default_str();
  train->add_option("--lambda", rc.lambda, "N3 weight")->capture_default_str();
  train->add_option("--smoothing", rc.smoothing, "temporal smoothness weight")->capture_default_str();
  train->add_option("--batch-size", rc.batch_size, "facts per batch")->capture_default_str();
  train->add_option("--valid-every", rc.valid_every, "validation period in epochs (0: last only)")
      ->capture_default_str();
  train->add_flag("--unconjugated", rc.unconjugated, "score s * h * o without conjugating the object");
  train->add_option("--init-scale", rc.init_scale, "standard deviation of the embedding initialisation")
      ->capture_default_str();
  train->add_option("--checkpoint", rc.checkpoint, "checkpoint path (default <out>/model.ckpt)");

  CLI::App* eval = app.add_subcommand("eval", "rank a split with time-aware filtering");
  add_common(eval, rc.seed);
  add_data(eval);
  eval->add_option("--checkpoint", rc.checkpoint, "trained checkpoint")->required();
  eval->add_option("--split", rc.split, "train, valid or test")->capture_default_str();
  eval->add_option("--sides", rc.sides, "subject, object or both")->capture_default_str();
  eval->add_flag("--per-query", rc.per_query, "include every rank in the report");

  CLI::App* analyze = app.add_subcommand("analyze", "pattern census and structural subsets");
  add_common(analyze, rc.seed);
  add_data(analyze);
  analyze->add_option("--star-size", rc.star_size, "temporal star size")->capture_default_str();
  analyze->add_flag("--reduce-intervals", rc.reduce_intervals, "reduce interval facts to begin points");

  CLI::App* verify = app.add_subcommand("verify", "check the proposition constructions");
  verify->add_option("--out", rc.out, "optional directory for a manifest");

  CLI::App* gen = app.add_subcommand("gen-toy", "write the seeded synthetic dataset");
  add_common(gen, rc.toy_seed);
  gen->add_option("--entities", rc.toy_entities, "entities")->capture_default_str();
  gen->add_option("--times", rc.toy_times, "time points")->capture_default_str();

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);  // CLI11 expects reversed order

  try {
    // Config values go first so that explicit flags override them.
    std::vector<std::string> forward(args.rbegin(), args.rend());
    std::string config_path;
    for (std::size_t i = 0; i < forward.size(); ++i) {
      if (forward[i] == "--config" && i + 1 < forward.size()) config_path = forward[i + 1];
      else if (forward[i].rfind("--config=", 0) == 0) config_path = forward[i].substr(9);
    }
    if (!config_path.empty() && !forward.empty()) {
      const CLI::App* sub = nullptr;
      for (CLI::App* s : {train, eval, analyze, verify, gen}) {
        if (s->get_name() == forward[0]) sub = s;
      }
      if (sub == nullptr) throw ConfigError("--config must follow a subcommand");
      auto extra = detail::config_arguments(config_path, *sub);
      forward.insert(forward.begin() + 1, extra.begin(), extra.end());
      args.assign(forward.rbegin(), forward.rend());
    }
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (train->parsed()) return detail::do_train(rc, *train, out);
    if (eval->parsed()) return detail::do_eval(rc, *eval, out);
    if (analyze->parsed()) return detail::do_analyze(rc, *analyze, out);
    if (verify->parsed()) return detail::do_verify(rc, *verify, out);
    if (gen->parsed()) return detail::do_gen_toy(rc, *gen, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hge::cli
