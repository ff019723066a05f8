// codonmpnn command-line tool. Subcommands cover the batch workflows:
// taxonomy-partition, train, sample, score, eval. Every run prints its
// resolved configuration and a config hash to stderr; stdout carries data
// only when an output path is "-". Exit codes: 0 ok, 2 parse error, 3 data
// error, 4 numerical fault, 5 unknown taxon under --strict-taxon.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "codonmpnn/codonmpnn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace codonmpnn;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct GlobalOptions {
  uint64_t seed = 0;
  int threads = 1;
  std::string precision = "f32";
  std::string log_level = "info";
};

void apply_log_level(const std::string& level) {
  if (level == "debug") set_log_level(LogLevel::Debug);
  else if (level == "info") set_log_level(LogLevel::Info);
  else if (level == "warn") set_log_level(LogLevel::Warn);
  else if (level == "error") set_log_level(LogLevel::Error);
  else throw ConfigMismatch("unknown log level " + level);
}

void print_resolved_config(const std::string& subcommand, const json& cfg) {
  json full = cfg;
  full["subcommand"] = subcommand;
  std::string dump = full.dump();
  std::cerr << "config: " << dump << "\n";
  std::cerr << "config_hash: " << hex64(fnv1a64(dump)) << "\n";
}

// Output stream that is either stdout ("-") or a file.
class DataSink {
 public:
  explicit DataSink(const std::string& path) : path_(path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::Data, "cannot open output " + path);
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Config: return 3;
    case ErrorKind::Numeric: return 4;
  }
  return 1;
}

uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

std::optional<ClusterAssignment> load_clusters(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cluster map " + path);
  return read_cluster_map(in);
}

// ---------------------------------------------------------------------------
// taxonomy-partition
// ---------------------------------------------------------------------------

struct TaxonomyArgs {
  std::string nodes_path;
  int64_t k = 20000;
  std::string out_path;
  std::string stats_path;
};

int cmd_taxonomy_partition(const TaxonomyArgs& args) {
  std::ifstream in(args.nodes_path);
  if (!in) throw ParseError("cannot open nodes file " + args.nodes_path);
  TaxonomyTree tree = parse_taxdump(in);
  CODONMPNN_LOG_INFO("parsed %lld taxonomy nodes, root %lld",
                     static_cast<long long>(tree.size()),
                     static_cast<long long>(tree.root_id()));
  ClusterAssignment assignment = partition(tree, args.k);
  DataSink sink(args.out_path);
  write_cluster_map(sink.stream(), assignment);
  if (!args.stats_path.empty()) {
    PartitionStats stats = partition_stats(assignment);
    json j;
    j["k"] = assignment.k;
    j["n"] = assignment.labels.size();
    j["max_size"] = stats.max_size;
    j["min_size"] = stats.min_size;
    j["mean_size"] = stats.mean_size;
    j["sizes"] = stats.sizes;
    std::ofstream stats_out(args.stats_path);
    stats_out << j.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data_path;
  std::string val_path;
  std::string clusters_path;
  std::string out_dir;
  std::string resume_path;
  int64_t steps = 1000;
  double lr = 1e-3;
  int64_t hidden = 128;
  int64_t batch = 4;
  int64_t val_every = 200;
  double taxon_dropout = 0.5;
  double label_smoothing = 0.0;
  int64_t knn = kDefaultKnn;
  int64_t taxon_clusters = 0;  // 0: from cluster map (or 1 if none)
  double plddt_threshold = 0.9;
  bool no_plddt_filter = false;
  std::string activation = "relu";
};

template <typename Real>
int cmd_train(const GlobalOptions& g, const TrainArgs& args) {
  auto clusters = load_clusters(args.clusters_path);

  std::vector<ProteinRecord> train_raw = read_records(args.data_path);
  if (!args.no_plddt_filter) {
    PlddtFilterResult f = filter_plddt(std::move(train_raw), args.plddt_threshold);
    CODONMPNN_LOG_INFO("pLDDT filter: kept %zu, dropped %zu", f.kept.size(), f.dropped);
    train_raw = std::move(f.kept);
  }
  std::vector<ProteinRecord> val_raw;
  if (!args.val_path.empty()) val_raw = read_records(args.val_path);

  TrainConfig cfg;
  cfg.lr = args.lr;
  cfg.batch_size = args.batch;
  cfg.max_steps = args.steps;
  cfg.seed = g.seed;
  cfg.taxon_dropout = args.taxon_dropout;
  cfg.label_smoothing = args.label_smoothing;
  cfg.val_every = args.val_every;
  cfg.checkpoint_dir = args.out_dir;
  cfg.threads = g.threads;

  Rng rng(g.seed);
  int64_t start_step = 0;
  std::unique_ptr<CodonMpnn<Real>> model;
  if (!args.resume_path.empty()) {
    auto [m, meta] = CodonMpnn<Real>::from_checkpoint(load_checkpoint_file(args.resume_path));
    model = std::make_unique<CodonMpnn<Real>>(std::move(m));
    if (meta.contains("rng_state"))
      rng.deserialize(meta["rng_state"].template get<std::string>());
    if (meta.contains("step")) start_step = meta["step"].template get<int64_t>();
    CODONMPNN_LOG_INFO("resumed from %s at step %lld", args.resume_path.c_str(),
                       static_cast<long long>(start_step));
  } else {
    ModelConfig mc;
    mc.hidden_dim = args.hidden;
    mc.knn = args.knn;
    mc.activation = args.activation;
    mc.taxon_clusters =
        args.taxon_clusters > 0 ? args.taxon_clusters : (clusters ? clusters->k : 1);
    model = std::make_unique<CodonMpnn<Real>>(mc, g.seed);
  }
  if (clusters && clusters->k != model->config().taxon_clusters)
    throw ConfigMismatch("cluster map k=" + std::to_string(clusters->k) +
                         " does not match model taxon_clusters=" +
                         std::to_string(model->config().taxon_clusters));

  const ClusterAssignment* cluster_ptr = clusters ? &*clusters : nullptr;
  int64_t null_label = model->config().null_taxon();
  auto train_set = prepare_records(train_raw, cluster_ptr, null_label,
                                   static_cast<int>(model->config().knn), g.threads);
  auto val_set = prepare_records(val_raw, cluster_ptr, null_label,
                                 static_cast<int>(model->config().knn), g.threads);
  CODONMPNN_LOG_INFO("training on %zu records (%zu val), %lld parameters", train_set.size(),
                     val_set.size(), static_cast<long long>(model->params().total_params()));

  fs::create_directories(args.out_dir);
  std::ofstream metrics(fs::path(args.out_dir) / "metrics.jsonl",
                        start_step > 0 ? std::ios::app : std::ios::trunc);
  TrainResult<Real> result = run_training(*model, cfg, train_set, val_set, &metrics, rng,
                                          start_step, hash_file(args.data_path));
  CODONMPNN_LOG_INFO("finished at step %lld, train loss %.4f, checkpoint %s",
                     static_cast<long long>(result.final_step), result.final_loss,
                     result.last_checkpoint.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// sample / score / eval shared loading
// ---------------------------------------------------------------------------

struct LoadedModel {
  std::optional<CodonMpnn<float>> f32;
  std::optional<CodonMpnn<double>> f64;
};

struct EvalContext {
  std::vector<ProteinRecord> records;
  std::optional<ClusterAssignment> clusters;
};

int64_t resolve_taxon_label(const std::optional<ClusterAssignment>& clusters,
                            std::optional<TaxId> tax_id, int64_t null_label, bool strict,
                            bool* unknown_seen) {
  if (!tax_id) return null_label;
  if (!clusters) {
    if (unknown_seen) *unknown_seen = true;
    return null_label;
  }
  int64_t label = clusters->lookup(*tax_id);
  if (label == clusters->k) {
    if (unknown_seen) *unknown_seen = true;
    return null_label;
  }
  return label;
}

std::map<int32_t, Codon> parse_fixed_spec(const std::string& spec) {
  std::map<int32_t, Codon> fixed;
  if (spec.empty()) return fixed;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigMismatch("--fixed entries must look like POS=TRIPLET, got " + item);
    int32_t pos = std::stoi(item.substr(0, eq));
    fixed.emplace(pos, encode_triplet(item.substr(eq + 1)));
  }
  return fixed;
}

struct SampleArgs {
  std::string ckpt_path;
  std::string data_path;
  std::string clusters_path;
  std::string taxon = "";  // "", "none", or a tax id
  int64_t num_samples = 1;
  double temperature = -1.0;  // <0: use checkpoint default
  bool greedy = false;
  bool allow_stop = false;
  bool strict_taxon = false;
  std::string fixed_spec;
  std::string out_path = "-";
};

template <typename Real>
int cmd_sample(const GlobalOptions& g, const SampleArgs& args) {
  auto [model, meta] = CodonMpnn<Real>::from_checkpoint(load_checkpoint_file(args.ckpt_path));
  auto clusters = load_clusters(args.clusters_path);
  std::vector<ProteinRecord> records = read_records(args.data_path);
  auto fixed = parse_fixed_spec(args.fixed_spec);

  // resolve the taxon override once; per-record tax ids otherwise
  const int64_t null_label = model.config().null_taxon();
  std::optional<int64_t> taxon_override;
  if (args.taxon == "none") {
    taxon_override = null_label;
  } else if (!args.taxon.empty()) {
    TaxId requested = std::stoll(args.taxon);
    bool unknown = false;
    int64_t label = resolve_taxon_label(clusters, requested, null_label, args.strict_taxon, &unknown);
    if (unknown) {
      if (args.strict_taxon) {
        CODONMPNN_LOG_ERROR("taxon %lld not found in cluster map (--strict-taxon)",
                            static_cast<long long>(requested));
        return 5;
      }
      CODONMPNN_LOG_WARN("taxon %lld unknown; falling back to the null label",
                         static_cast<long long>(requested));
    }
    taxon_override = label;
  }

  auto prepared = prepare_records(records, clusters ? &*clusters : nullptr, null_label,
                                  static_cast<int>(model.config().knn), g.threads);
  double temperature = args.temperature >= 0 ? args.temperature : model.config().temperature;

  DataSink sink(args.out_path);
  for (size_t r = 0; r < prepared.size(); ++r) {
    int64_t taxon = taxon_override ? *taxon_override : prepared[r].taxon;
    for (int64_t s = 0; s < args.num_samples; ++s) {
      SampleOptions opts;
      opts.temperature = temperature;
      opts.greedy = args.greedy;
      opts.allow_stop = args.allow_stop;
      opts.fixed = fixed;
      opts.seed = fnv1a64(prepared[r].id) ^ g.seed ^ (0x51ed2700d2b5ull * (s + 1));
      CodonSeq gen = model.sample(*prepared[r].graph, taxon, opts);
      double logp = model.score(*prepared[r].graph, taxon, gen).total_logp;
      json line = {{"record_id", prepared[r].id},
                   {"sample_idx", s},
                   {"codons", gen.nucleotides()},
                   {"aa", translate_seq(gen, true)},
                   {"logp", logp}};
      sink.stream() << line.dump() << "\n";
    }
  }
  return 0;
}

struct ScoreArgs {
  std::string ckpt_path;
  std::string data_path;
  std::string clusters_path;
  std::string out_path = "-";
  bool per_position = false;
};

template <typename Real>
int cmd_score(const GlobalOptions& g, const ScoreArgs& args) {
  auto [model, meta] = CodonMpnn<Real>::from_checkpoint(load_checkpoint_file(args.ckpt_path));
  auto clusters = load_clusters(args.clusters_path);
  std::vector<ProteinRecord> records = read_records(args.data_path);
  auto prepared = prepare_records(records, clusters ? &*clusters : nullptr,
                                  model.config().null_taxon(),
                                  static_cast<int>(model.config().knn), g.threads);
  std::vector<json> lines(prepared.size());
  parallel_for(prepared.size(), g.threads, [&](size_t i) {
    ScoreResult sr = model.score(*prepared[i].graph, prepared[i].taxon, prepared[i].codons);
    json line = {{"id", prepared[i].id}, {"logp", sr.total_logp}};
    if (args.per_position) line["per_position"] = sr.per_position;
    lines[i] = std::move(line);
  });
  DataSink sink(args.out_path);
  for (const auto& line : lines) sink.stream() << line.dump() << "\n";
  return 0;
}

struct EvalArgs {
  std::string ckpt_path;
  std::string data_path;
  std::string pairs_path;
  std::string clusters_path;
  std::string report_path;
  std::string per_aa_tsv_path;
  std::string pairs_tsv_path;
  bool self_check = false;
  bool sample_mode = false;  // default: greedy, identity order
  double temperature = 0.1;
  bool per_cluster_usage = false;
};

template <typename Real>
int cmd_eval(const GlobalOptions& g, const EvalArgs& args) {
  auto [model, meta] = CodonMpnn<Real>::from_checkpoint(load_checkpoint_file(args.ckpt_path));
  auto clusters = load_clusters(args.clusters_path);
  std::vector<ProteinRecord> records = read_records(args.data_path);
  auto prepared = prepare_records(records, clusters ? &*clusters : nullptr,
                                  model.config().null_taxon(),
                                  static_cast<int>(model.config().knn), g.threads);
  if (prepared.empty()) throw EmptyValSet("no records to evaluate");

  // usage statistics from the wild types of the evaluated corpus
  std::vector<CodonSeq> wild_types;
  for (const auto& p : prepared) wild_types.push_back(p.codons);
  UsageTable usage = build_usage_table(wild_types, args.data_path);
  std::map<int64_t, UsageTable> cluster_usage;
  if (args.per_cluster_usage) {
    for (const auto& p : prepared) {
      auto [it, inserted] = cluster_usage.try_emplace(p.taxon, UsageTable{});
      for (Codon c : p.codons.codons()) it->second.add(c);
    }
  }

  std::vector<CodonSeq> generated(prepared.size());
  parallel_for(prepared.size(), g.threads, [&](size_t i) {
    SampleOptions opts;
    if (args.sample_mode) {
      opts.temperature = args.temperature;
      opts.seed = fnv1a64(prepared[i].id) ^ g.seed;
    } else {
      opts.greedy = true;
      opts.sigma = Permutation::identity(prepared[i].graph->length);
    }
    generated[i] = model.sample(*prepared[i].graph, prepared[i].taxon, opts);
  });

  json report;
  {
    // accumulate per usage table; per-cluster tables fall back to global
    std::map<int64_t, RecoveryAccumulator> by_cluster;
    RecoveryAccumulator global(usage);
    for (size_t i = 0; i < prepared.size(); ++i) {
      if (args.per_cluster_usage) {
        auto it = by_cluster.try_emplace(prepared[i].taxon,
                                         RecoveryAccumulator(cluster_usage.at(prepared[i].taxon)));
        it.first->second.add(generated[i], prepared[i].codons);
      }
      global.add(generated[i], prepared[i].codons);
    }
    RecoveryReport rep = global.report();
    if (args.self_check && !report_self_check(rep))
      throw Error(ErrorKind::Numeric, "recovery report failed self-check re-aggregation");
    report["recovery"] = rep.to_json();
    if (args.per_cluster_usage) {
      json per_cluster = json::object();
      for (auto& [taxon, acc] : by_cluster)
        per_cluster[std::to_string(taxon)] = acc.report().to_json();
      report["recovery_per_cluster_usage"] = per_cluster;
    }
    if (!args.per_aa_tsv_path.empty()) {
      std::ofstream tsv(args.per_aa_tsv_path);
      write_per_aa_tsv(tsv, rep);
    }
  }

  if (!args.pairs_path.empty()) {
    std::ifstream pin(args.pairs_path);
    if (!pin) throw SchemaError("cannot open pairs file " + args.pairs_path);
    std::vector<SynonymousPair> pairs = read_pairs(pin);
    std::map<std::string, size_t> by_id;
    for (size_t i = 0; i < prepared.size(); ++i) by_id[prepared[i].id] = i;
    std::vector<const ResidueGraph*> graphs;
    std::vector<int64_t> taxa;
    for (const auto& p : pairs) {
      auto it = by_id.find(p.structure_id);
      if (it == by_id.end())
        throw UnknownId("pair " + p.id + " references unknown structure " + p.structure_id);
      graphs.push_back(prepared[it->second].graph.get());
      taxa.push_back(prepared[it->second].taxon);
    }
    PairEvalResult pr = synonymous_pair_eval(model, pairs, graphs, taxa, nullptr, g.threads);
    report["pairs"] = {{"count", pairs.size()}, {"fraction_correct", pr.fraction_correct}};
    if (!args.pairs_tsv_path.empty()) {
      std::ofstream tsv(args.pairs_tsv_path);
      write_pair_tsv(tsv, pr);
    }
  }

  DataSink sink(args.report_path);
  sink.stream() << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"codon inverse folding: structure-conditioned codon sequence generation"};
  app.require_subcommand(0, 1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "global RNG seed");
  app.add_option("--threads", g.threads, "worker threads for featurization and evaluation");
  app.add_option("--precision", g.precision, "compute precision")
      ->check(CLI::IsMember({"f32", "f64"}));
  app.add_option("--log-level", g.log_level, "stderr log level")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));
  bool show_version = false;
  app.add_flag("--version", show_version, "print tool and format versions");

  TaxonomyArgs tax_args;
  CLI::App* tax = app.add_subcommand("taxonomy-partition",
                                     "cluster the NCBI taxonomy into balanced groups");
  tax->add_option("--nodes", tax_args.nodes_path, "nodes.dmp path")->required();
  tax->add_option("-k,--clusters", tax_args.k, "number of clusters");
  tax->add_option("--out", tax_args.out_path, "output cluster TSV ('-' for stdout)")->required();
  tax->add_option("--stats", tax_args.stats_path, "optional stats JSON path");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--data", train_args.data_path, "training JSONL")->required();
  train->add_option("--val", train_args.val_path, "validation JSONL");
  train->add_option("--clusters", train_args.clusters_path, "taxon cluster map TSV");
  train->add_option("--out", train_args.out_dir, "checkpoint/metrics directory")->required();
  train->add_option("--steps", train_args.steps, "optimization steps");
  train->add_option("--lr", train_args.lr, "learning rate");
  train->add_option("--hidden", train_args.hidden, "hidden dimension");
  train->add_option("--batch", train_args.batch, "batch size");
  train->add_option("--val-every", train_args.val_every, "validation interval");
  train->add_option("--taxon-dropout", train_args.taxon_dropout,
                    "probability of replacing the taxon label by null");
  train->add_option("--label-smoothing", train_args.label_smoothing, "label smoothing");
  train->add_option("--knn", train_args.knn, "neighbors per residue");
  train->add_option("--taxon-clusters", train_args.taxon_clusters,
                    "embedding table size (default: from cluster map)");
  train->add_option("--plddt-threshold", train_args.plddt_threshold, "mean pLDDT filter");
  train->add_flag("--no-plddt-filter", train_args.no_plddt_filter, "disable the pLDDT filter");
  train->add_option("--activation", train_args.activation, "relu or gelu")
      ->check(CLI::IsMember({"relu", "gelu"}));
  train->add_option("--resume", train_args.resume_path, "checkpoint to resume from");

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "sample codon sequences for structures");
  sample->add_option("--ckpt", sample_args.ckpt_path, "checkpoint path")->required();
  sample->add_option("--data", sample_args.data_path, "structures JSONL")->required();
  sample->add_option("--clusters", sample_args.clusters_path, "taxon cluster map TSV");
  sample->add_option("--taxon", sample_args.taxon, "tax id to condition on, or 'none'");
  sample->add_option("-n,--num-samples", sample_args.num_samples, "samples per record");
  sample->add_option("--temperature", sample_args.temperature, "softmax temperature");
  sample->add_flag("--greedy", sample_args.greedy, "argmax decoding (temperature -> 0 limit)");
  sample->add_flag("--allow-stop", sample_args.allow_stop, "lift the stop-codon mask");
  sample->add_flag("--strict-taxon", sample_args.strict_taxon,
                   "fail (exit 5) when the requested taxon is unknown");
  sample->add_option("--fixed", sample_args.fixed_spec, "clamped positions, e.g. 0=AUG,5=GGA");
  sample->add_option("--out", sample_args.out_path, "output JSONL ('-' for stdout)");

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand("score", "log-likelihoods of wild-type sequences");
  score->add_option("--ckpt", score_args.ckpt_path, "checkpoint path")->required();
  score->add_option("--data", score_args.data_path, "records JSONL")->required();
  score->add_option("--clusters", score_args.clusters_path, "taxon cluster map TSV");
  score->add_option("--out", score_args.out_path, "output JSONL ('-' for stdout)");
  score->add_flag("--per-position", score_args.per_position, "emit per-position log-probs");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "recovery metrics and pair ranking");
  eval->add_option("--ckpt", eval_args.ckpt_path, "checkpoint path")->required();
  eval->add_option("--data", eval_args.data_path, "records JSONL")->required();
  eval->add_option("--pairs", eval_args.pairs_path, "synonymous pairs JSONL");
  eval->add_option("--clusters", eval_args.clusters_path, "taxon cluster map TSV");
  eval->add_option("--report", eval_args.report_path, "report JSON ('-' for stdout)")->required();
  eval->add_option("--per-aa-tsv", eval_args.per_aa_tsv_path, "per-amino-acid TSV output");
  eval->add_option("--pairs-tsv", eval_args.pairs_tsv_path, "per-pair TSV output");
  eval->add_flag("--self-check", eval_args.self_check, "verify per-aa re-aggregation");
  eval->add_flag("--sample-mode", eval_args.sample_mode, "sampled instead of greedy decoding");
  eval->add_option("--temperature", eval_args.temperature, "temperature for --sample-mode");
  eval->add_flag("--per-cluster-usage", eval_args.per_cluster_usage,
                 "additionally report recovery under per-cluster usage tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (show_version) {
    std::cout << "codonmpnn " << kToolVersion << "\n"
              << "checkpoint format CMPN v" << kCheckpointVersion << "\n"
              << "feature dump format CMPF v" << kFeatureDumpVersion << "\n"
              << "cluster map TSV header #k=<k>\\t#n=<n>\n";
    return 0;
  }

  try {
    apply_log_level(g.log_level);
    json gcfg = {{"seed", g.seed},
                 {"threads", g.threads},
                 {"precision", g.precision},
                 {"log_level", g.log_level}};
    const bool f64 = g.precision == "f64";

    if (tax->parsed()) {
      json cfg = gcfg;
      cfg.update({{"nodes", tax_args.nodes_path},
                  {"k", tax_args.k},
                  {"out", tax_args.out_path},
                  {"stats", tax_args.stats_path}});
      print_resolved_config("taxonomy-partition", cfg);
      return cmd_taxonomy_partition(tax_args);
    }
    if (train->parsed()) {
      json cfg = gcfg;
      cfg.update({{"data", train_args.data_path}, {"val", train_args.val_path},
                  {"clusters", train_args.clusters_path}, {"out", train_args.out_dir},
                  {"steps", train_args.steps}, {"lr", train_args.lr},
                  {"hidden", train_args.hidden}, {"batch", train_args.batch},
                  {"val_every", train_args.val_every},
                  {"taxon_dropout", train_args.taxon_dropout},
                  {"label_smoothing", train_args.label_smoothing}, {"knn", train_args.knn},
                  {"activation", train_args.activation}, {"resume", train_args.resume_path}});
      print_resolved_config("train", cfg);
      return f64 ? cmd_train<double>(g, train_args) : cmd_train<float>(g, train_args);
    }
    if (sample->parsed()) {
      json cfg = gcfg;
      cfg.update({{"ckpt", sample_args.ckpt_path}, {"data", sample_args.data_path},
                  {"clusters", sample_args.clusters_path}, {"taxon", sample_args.taxon},
                  {"num_samples", sample_args.num_samples},
                  {"temperature", sample_args.temperature}, {"greedy", sample_args.greedy},
                  {"allow_stop", sample_args.allow_stop},
                  {"strict_taxon", sample_args.strict_taxon}, {"fixed", sample_args.fixed_spec},
                  {"out", sample_args.out_path}});
      print_resolved_config("sample", cfg);
      return f64 ? cmd_sample<double>(g, sample_args) : cmd_sample<float>(g, sample_args);
    }
    if (score->parsed()) {
      json cfg = gcfg;
      cfg.update({{"ckpt", score_args.ckpt_path}, {"data", score_args.data_path},
                  {"clusters", score_args.clusters_path}, {"out", score_args.out_path},
                  {"per_position", score_args.per_position}});
      print_resolved_config("score", cfg);
      return f64 ? cmd_score<double>(g, score_args) : cmd_score<float>(g, score_args);
    }
    if (eval->parsed()) {
      json cfg = gcfg;
      cfg.update({{"ckpt", eval_args.ckpt_path}, {"data", eval_args.data_path},
                  {"pairs", eval_args.pairs_path}, {"clusters", eval_args.clusters_path},
                  {"report", eval_args.report_path}, {"self_check", eval_args.self_check},
                  {"sample_mode", eval_args.sample_mode},
                  {"temperature", eval_args.temperature},
                  {"per_cluster_usage", eval_args.per_cluster_usage}});
      print_resolved_config("eval", cfg);
      return f64 ? cmd_eval<double>(g, eval_args) : cmd_eval<float>(g, eval_args);
    }
    std::cerr << app.help() << "\n";
    return 0;
  } catch (const Error& e) {
    CODONMPNN_LOG_ERROR("%s", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    CODONMPNN_LOG_ERROR("unhandled: %s", e.what());
    return 1;
  }
}
