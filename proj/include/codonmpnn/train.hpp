#pragma once

// Training: per-example random decoding orders, taxon-label dropout to the
// null token, teacher-forced cross-entropy, adaptive-moment updates,
// validation, and checkpointing with bit-exact resume.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "codonmpnn/corpus.hpp"
#include "codonmpnn/featurize.hpp"
#include "codonmpnn/model.hpp"
#include "codonmpnn/optim.hpp"
#include "codonmpnn/taxonomy.hpp"
#include "codonmpnn/util.hpp"

namespace codonmpnn {

struct TrainConfig {
  double lr = 1e-3;
  int64_t batch_size = 4;
  int64_t max_steps = 1000;
  uint64_t seed = 0;
  double taxon_dropout = 0.5;
  double label_smoothing = 0.0;
  int64_t val_every = 200;
  std::string checkpoint_dir;
  int threads = 1;

  void validate() const {
    if (!(lr > 0.0)) throw ConfigMismatch("lr must be > 0");
    if (taxon_dropout < 0.0 || taxon_dropout > 1.0)
      throw ConfigMismatch("taxon_dropout must be in [0,1]");
    if (batch_size < 1) throw ConfigMismatch("batch_size must be >= 1");
    if (max_steps < 0) throw ConfigMismatch("max_steps must be >= 0");
  }
};

// A record prepared for the model: residue graph + wild type + taxon label.
struct PreparedRecord {
  std::string id;
  std::shared_ptr<const ResidueGraph> graph;
  CodonSeq codons;
  int64_t taxon = 0;
};

// Featurizes records, deduplicating identical coordinate sets (the graph
// depends only on coords). Taxon labels come from the cluster map; records
// without a tax_id, or with one absent from the map, get the null label.
inline std::vector<PreparedRecord> prepare_records(const std::vector<ProteinRecord>& records,
                                                   const ClusterAssignment* clusters,
                                                   int64_t null_label, int knn, int threads = 1) {
  std::vector<PreparedRecord> prepared(records.size());
  std::unordered_map<uint64_t, std::shared_ptr<const ResidueGraph>> dedup;
  std::vector<uint64_t> coord_hash(records.size());
  for (size_t i = 0; i < records.size(); ++i)
    coord_hash[i] = fnv1a64(records[i].coords.data(), records[i].coords.size() * sizeof(double));

  // featurize unique structures in parallel, then share graphs
  std::vector<size_t> unique_idx;
  for (size_t i = 0; i < records.size(); ++i)
    if (!dedup.count(coord_hash[i])) {
      dedup[coord_hash[i]] = nullptr;
      unique_idx.push_back(i);
    }
  std::vector<std::shared_ptr<const ResidueGraph>> unique_graphs(unique_idx.size());
  parallel_for(unique_idx.size(), threads, [&](size_t u) {
    unique_graphs[u] = std::make_shared<const ResidueGraph>(build_graph(records[unique_idx[u]], knn));
  });
  for (size_t u = 0; u < unique_idx.size(); ++u)
    dedup[coord_hash[unique_idx[u]]] = unique_graphs[u];

  for (size_t i = 0; i < records.size(); ++i) {
    prepared[i].id = records[i].id;
    prepared[i].graph = dedup.at(coord_hash[i]);
    prepared[i].codons = records[i].codons;
    if (records[i].tax_id && clusters)
      prepared[i].taxon = clusters->lookup(*records[i].tax_id);
    else
      prepared[i].taxon = null_label;
  }
  return prepared;
}

template <typename Real>
struct StepResult {
  double loss = 0.0;
  std::vector<std::string> disconnected;  // params that never touched the tape
};

// One optimization step over a batch. Per example: a fresh uniform-random
// decoding order; the taxon label replaced by null with the dropout
// probability; teacher-forced cross-entropy averaged over positions. The
// batch loss is the mean of per-example losses, followed by one adam step.
template <typename Real>
StepResult<Real> train_step(CodonMpnn<Real>& model, const std::vector<const PreparedRecord*>& batch,
                            const AdamConfig& adam, double taxon_dropout, double label_smoothing,
                            Rng& rng) {
  if (batch.empty()) throw EmptyValSet("train_step needs a nonempty batch");
  Tape<Real> tape(true);
  std::vector<Var<Real>> example_losses;
  example_losses.reserve(batch.size());
  for (const PreparedRecord* item : batch) {
    const int32_t L = item->graph->length;
    Permutation sigma = Permutation::random(L, rng);
    int64_t taxon = rng.bernoulli(taxon_dropout) ? model.config().null_taxon() : item->taxon;
    Encoded<Real> enc = model.encode(tape, *item->graph, taxon);
    std::vector<int> tokens(L);
    std::vector<int64_t> targets(L);
    for (int32_t i = 0; i < L; ++i) {
      tokens[i] = item->codons[i].index();
      targets[i] = item->codons[i].index();
    }
    Var<Real> logits = model.decode_logits_ranked(tape, enc, tokens, sigma.ranks());
    Var<Real> ce = ad::cross_entropy_rows(tape, logits, targets, Real(label_smoothing));
    example_losses.push_back(ad::mean_all(tape, ce));
  }
  Var<Real> loss = ad::scale_const(tape, ad::add_scalars(tape, example_losses),
                                   Real(1) / Real(example_losses.size()));
  tape.backward(loss);
  StepResult<Real> result;
  result.loss = static_cast<double>(loss.value()[0]);
  result.disconnected = model.params().disconnected(tape);
  model.params().adam_step(adam);
  return result;
}

struct ValMetrics {
  double val_loss = 0.0;
  double codon_recovery = 0.0;
  double aa_recovery = 0.0;
};

// Deterministic validation: teacher-forced loss and greedy decode (argmax,
// identity order) recoveries, both under each record's own taxon label.
template <typename Real>
ValMetrics evaluate_val(const CodonMpnn<Real>& model, const std::vector<PreparedRecord>& records,
                        int threads = 1) {
  if (records.empty()) throw EmptyValSet("validation set is empty");
  struct PerRecord {
    double loss = 0;
    int64_t codon_matches = 0;
    int64_t aa_matches = 0;
    int64_t positions = 0;
  };
  std::vector<PerRecord> per(records.size());
  parallel_for(records.size(), threads, [&](size_t i) {
    const PreparedRecord& item = records[i];
    const int32_t L = item.graph->length;
    ScoreResult sr = model.score(*item.graph, item.taxon, item.codons);
    SampleOptions opts;
    opts.greedy = true;
    opts.sigma = Permutation::identity(L);
    CodonSeq gen = model.sample(*item.graph, item.taxon, opts);
    PerRecord r;
    r.loss = -sr.total_logp / L;
    r.positions = L;
    for (int32_t p = 0; p < L; ++p) {
      if (gen[p] == item.codons[p]) ++r.codon_matches;
      if (translate(gen[p]) == translate(item.codons[p])) ++r.aa_matches;
    }
    per[i] = r;
  });
  ValMetrics out;
  int64_t total_positions = 0, codon_matches = 0, aa_matches = 0;
  for (const auto& r : per) {
    out.val_loss += r.loss;
    total_positions += r.positions;
    codon_matches += r.codon_matches;
    aa_matches += r.aa_matches;
  }
  out.val_loss /= static_cast<double>(records.size());
  out.codon_recovery = static_cast<double>(codon_matches) / static_cast<double>(total_positions);
  out.aa_recovery = static_cast<double>(aa_matches) / static_cast<double>(total_positions);
  return out;
}

template <typename Real>
struct TrainResult {
  int64_t final_step = 0;
  double final_loss = 0.0;
  std::string last_checkpoint;
  std::string best_checkpoint;
  std::optional<ValMetrics> best_val;
};

// Full training run. Batches are drawn with replacement from the training
// set, so the whole trajectory is a pure function of the RNG state; resuming
// from a checkpoint restores that state and continues bit-exactly.
template <typename Real>
TrainResult<Real> run_training(CodonMpnn<Real>& model, const TrainConfig& cfg,
                               const std::vector<PreparedRecord>& train_records,
                               const std::vector<PreparedRecord>& val_records,
                               std::ostream* metrics_log, Rng& rng, int64_t start_step = 0,
                               uint64_t corpus_hash = 0) {
  cfg.validate();
  if (train_records.empty()) throw EmptyValSet("training set is empty");
  namespace fs = std::filesystem;
  if (!cfg.checkpoint_dir.empty()) fs::create_directories(cfg.checkpoint_dir);

  AdamConfig adam;
  adam.lr = cfg.lr;

  TrainResult<Real> result;
  double best_val_loss = std::numeric_limits<double>::infinity();

  auto write_checkpoint = [&](const std::string& name, int64_t step) -> std::string {
    if (cfg.checkpoint_dir.empty()) return "";
    nlohmann::json meta;
    meta["step"] = step;
    meta["seed"] = cfg.seed;
    meta["rng_state"] = rng.serialize();
    meta["corpus_hash"] = hex64(corpus_hash);
    std::string path = (fs::path(cfg.checkpoint_dir) / name).string();
    save_checkpoint_file(path, model.to_checkpoint(meta));
    return path;
  };

  auto log_line = [&](const nlohmann::json& j) {
    if (metrics_log) *metrics_log << j.dump() << "\n" << std::flush;
  };

  auto run_validation = [&](int64_t step) {
    if (val_records.empty()) return;
    ValMetrics vm = evaluate_val(model, val_records, cfg.threads);
    log_line({{"step", step},
              {"train_loss", result.final_loss},
              {"val_loss", vm.val_loss},
              {"codon_rec", vm.codon_recovery},
              {"aa_rec", vm.aa_recovery}});
    if (vm.val_loss < best_val_loss) {
      best_val_loss = vm.val_loss;
      result.best_val = vm;
      result.best_checkpoint = write_checkpoint("best.cmpn", step);
    }
  };

  if (cfg.max_steps == 0) {
    result.last_checkpoint = write_checkpoint("last.cmpn", start_step);
    result.final_step = start_step;
    return result;
  }

  const size_t n = train_records.size();
  int warned_disconnected = 0;
  for (int64_t step = start_step + 1; step <= cfg.max_steps; ++step) {
    std::vector<const PreparedRecord*> batch;
    batch.reserve(cfg.batch_size);
    for (int64_t b = 0; b < cfg.batch_size; ++b)
      batch.push_back(&train_records[rng.below(n)]);
    StepResult<Real> sr =
        train_step(model, batch, adam, cfg.taxon_dropout, cfg.label_smoothing, rng);
    result.final_loss = sr.loss;
    result.final_step = step;
    // taxon rows excluded by the dropout draw legitimately sit idle; other
    // parameters should not
    if (!sr.disconnected.empty() && warned_disconnected < 3) {
      for (const auto& name : sr.disconnected)
        if (name.rfind("taxon_embed", 0) != 0) {
          CODONMPNN_LOG_WARN("step %lld: parameter %s never influenced the loss",
                             static_cast<long long>(step), name.c_str());
          ++warned_disconnected;
        }
    }
    log_line({{"step", step}, {"train_loss", sr.loss}, {"lr", cfg.lr}});
    if (cfg.val_every > 0 && step % cfg.val_every == 0) run_validation(step);
  }
  result.last_checkpoint = write_checkpoint("last.cmpn", result.final_step);
  if (result.best_checkpoint.empty() && !val_records.empty()) run_validation(result.final_step);
  return result;
}

}  // namespace codonmpnn
