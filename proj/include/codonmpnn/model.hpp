#pragma once

// The codon inverse-folding network: a message-passing structure encoder and
// an any-order autoregressive codon decoder over the residue graph, with an
// organism-cluster embedding added to the initial node and edge embeddings.
//
// Masking contract: when predicting position p under decoding order sigma,
// token embeddings flow only from positions already decoded (lower sigma
// rank); positions not yet decoded contribute their frozen encoder embedding
// with the MASK token in the sequence channel. One teacher-forced pass
// therefore yields the conditional logits for every position at once.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codonmpnn/autodiff.hpp"
#include "codonmpnn/checkpoint.hpp"
#include "codonmpnn/featurize.hpp"
#include "codonmpnn/genetic_code.hpp"
#include "codonmpnn/optim.hpp"
#include "codonmpnn/tensor.hpp"
#include "codonmpnn/util.hpp"

namespace codonmpnn {

inline constexpr int kMaskToken = 64;
inline constexpr int kPadToken = 65;
inline constexpr int kTokenVocab = 66;  // 64 codons + MASK + PAD
inline constexpr int kLogitClasses = 64;

inline const std::vector<int>& stop_codon_indices() {
  static const std::vector<int> stops = [] {
    std::vector<int> s;
    for (int c = 0; c < kNumCodons; ++c)
      if (translate(Codon(c)).is_stop()) s.push_back(c);
    return s;
  }();
  return stops;
}

struct ModelConfig {
  int64_t hidden_dim = 128;
  int64_t encoder_layers = 3;  // paper-fixed
  int64_t decoder_layers = 3;  // paper-fixed
  int64_t knn = kDefaultKnn;
  int64_t taxon_clusters = 20000;  // k; embedding table has k+1 rows incl. null
  double temperature = 0.1;        // default sampling temperature
  std::string activation = "relu";  // or "gelu"

  int64_t null_taxon() const { return taxon_clusters; }

  nlohmann::json to_json() const {
    return {{"hidden_dim", hidden_dim},     {"encoder_layers", encoder_layers},
            {"decoder_layers", decoder_layers}, {"knn", knn},
            {"taxon_clusters", taxon_clusters}, {"temperature", temperature},
            {"activation", activation}};
  }

  static ModelConfig from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    cfg.hidden_dim = j.at("hidden_dim").get<int64_t>();
    cfg.encoder_layers = j.at("encoder_layers").get<int64_t>();
    cfg.decoder_layers = j.at("decoder_layers").get<int64_t>();
    cfg.knn = j.at("knn").get<int64_t>();
    cfg.taxon_clusters = j.at("taxon_clusters").get<int64_t>();
    cfg.temperature = j.at("temperature").get<double>();
    cfg.activation = j.value("activation", std::string("relu"));
    return cfg;
  }

  void validate() const {
    if (hidden_dim < 1) throw ConfigMismatch("hidden_dim must be positive");
    if (taxon_clusters < 1) throw ConfigMismatch("taxon_clusters must be positive");
    if (knn < 1) throw ConfigMismatch("knn must be positive");
    if (activation != "relu" && activation != "gelu")
      throw ConfigMismatch("activation must be relu or gelu, got " + activation);
  }
};

// Decoding order: order()[t] is the position decoded at step t.
class Permutation {
 public:
  explicit Permutation(std::vector<int32_t> order) : order_(std::move(order)) {
    std::vector<int32_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != static_cast<int32_t>(i))
        throw NotABijection("order array is not a permutation of 0.." +
                            std::to_string(sorted.size() - 1));
  }

  static Permutation identity(int32_t n) {
    std::vector<int32_t> order(n);
    for (int32_t i = 0; i < n; ++i) order[i] = i;
    return Permutation(std::move(order));
  }

  static Permutation random(int32_t n, Rng& rng) { return Permutation(rng.permutation(n)); }

  int32_t size() const { return static_cast<int32_t>(order_.size()); }
  const std::vector<int32_t>& order() const { return order_; }

  // rank[p] = step at which position p is decoded
  std::vector<int32_t> ranks() const {
    std::vector<int32_t> rank(order_.size());
    for (size_t t = 0; t < order_.size(); ++t) rank[order_[t]] = static_cast<int32_t>(t);
    return rank;
  }

 private:
  std::vector<int32_t> order_;
};

template <typename Real>
struct Encoded {
  Var<Real> nodes;  // [L, h]
  Var<Real> edges;  // [E, h]
  int32_t length = 0;
  const ResidueGraph* graph = nullptr;
  int64_t taxon = 0;
};

struct ScoreResult {
  double total_logp = 0.0;
  std::vector<double> per_position;
};

struct SampleOptions {
  double temperature = 0.1;
  bool greedy = false;      // argmax mode, the temperature -> 0 limit
  bool allow_stop = false;  // lift the stop-codon mask
  std::optional<Permutation> sigma;  // default: fresh random order per call
  std::map<int32_t, Codon> fixed;    // clamped positions, conditioned on
  uint64_t seed = 0;
};

template <typename Real>
class CodonMpnn {
 public:
  explicit CodonMpnn(ModelConfig cfg, uint64_t seed = 0) : cfg_(cfg) {
    cfg_.validate();
    init_params(seed);
  }

  const ModelConfig& config() const { return cfg_; }
  ParamStore<Real>& params() { return params_; }
  const ParamStore<Real>& params() const { return params_; }

  // ---- encoder -----------------------------------------------------------

  Encoded<Real> encode(Tape<Real>& tape, const ResidueGraph& g, int64_t taxon) const {
    if (g.knn != cfg_.knn)
      throw ConfigMismatch("graph knn " + std::to_string(g.knn) + " != model knn " +
                           std::to_string(cfg_.knn));
    if (taxon < 0 || taxon > cfg_.taxon_clusters)
      throw IndexOutOfRange("taxon label " + std::to_string(taxon) + " outside [0, " +
                            std::to_string(cfg_.taxon_clusters) + "]");
    const int64_t L = g.length;
    const int64_t E = g.num_edges();
    const int64_t h = cfg_.hidden_dim;

    // raw edge features as a constant leaf
    Tensor<Real> feat({E, kEdgeFeatureDim});
    for (int64_t i = 0; i < E * kEdgeFeatureDim; ++i)
      feat.data[i] = static_cast<Real>(g.edge_features[i]);
    Var<Real> x_e = tape.leaf(std::move(feat));

    Var<Real> e = ad::add_rowvec(tape, ad::matmul(tape, x_e, p("edge_embed.w")), p("edge_embed.b"));

    // taxon embedding added to every initial node and edge embedding
    Var<Real> tax = ad::row_gather(tape, p("taxon_embed"), {taxon});      // [1,h]
    Var<Real> tax_e = ad::matmul(tape, tax, p("taxon_edge_proj.w"));      // [1,h]
    e = ad::add_rowvec(tape, e, tax_e);
    // initial node features are zeros; the taxon row is the whole signal
    Var<Real> nodes = ad::add_rowvec(tape, tape.leaf(Tensor<Real>({L, h})), tax);

    auto [dst_idx, src_idx] = edge_indices(g);
    std::vector<Real> inv_deg = inverse_degrees(g);

    for (int64_t layer = 0; layer < cfg_.encoder_layers; ++layer) {
      std::string prefix = "enc." + std::to_string(layer);
      Var<Real> h_dst = ad::row_gather(tape, nodes, dst_idx);
      Var<Real> h_src = ad::row_gather(tape, nodes, src_idx);
      Var<Real> m = message_mlp(tape, prefix, {h_dst, h_src, e});
      Var<Real> agg = ad::scale_rows_const(
          tape, ad::scatter_add_rows(tape, m, dst_idx, L), inv_deg);
      nodes = ad::layer_norm(tape, ad::add(tape, nodes, agg), p(prefix + ".ln.g"),
                             p(prefix + ".ln.b"));
    }

    Encoded<Real> enc;
    enc.nodes = nodes;
    enc.edges = e;
    enc.length = g.length;
    enc.graph = &g;
    enc.taxon = taxon;
    return enc;
  }

  // ---- decoder -----------------------------------------------------------

  // One teacher-forced pass. tokens[p] in [0,64) for known positions or
  // kMaskToken for not-yet-decoded ones; rank is the decoding order rank.
  // Returns [L, 64] logits; row p conditions exactly on tokens of lower rank.
  Var<Real> decode_logits_ranked(Tape<Real>& tape, const Encoded<Real>& enc,
                                 const std::vector<int>& tokens,
                                 const std::vector<int32_t>& rank) const {
    const ResidueGraph& g = *enc.graph;
    const int64_t L = g.length;
    const int64_t E = g.num_edges();
    if (static_cast<int64_t>(tokens.size()) != L || static_cast<int64_t>(rank.size()) != L)
      throw LengthMismatch("decode needs " + std::to_string(L) + " tokens and ranks");
    for (int t : tokens)
      if (t < 0 || t > kMaskToken)
        throw IndexOutOfRange("token " + std::to_string(t) + " outside [0, 64]");

    auto [dst_idx, src_idx] = edge_indices(g);
    std::vector<Real> inv_deg = inverse_degrees(g);

    // per-edge sequence channel: the sender's token where visible, else MASK
    std::vector<int64_t> edge_token(E);
    std::vector<uint8_t> visible(E);
    for (int64_t t = 0; t < E; ++t) {
      bool vis = rank[src_idx[t]] < rank[dst_idx[t]];
      visible[t] = vis ? 1 : 0;
      edge_token[t] = vis ? tokens[src_idx[t]] : kMaskToken;
    }
    Var<Real> tok_e = ad::row_gather(tape, p("token_embed"), edge_token);

    Var<Real> nodes = enc.nodes;
    for (int64_t layer = 0; layer < cfg_.decoder_layers; ++layer) {
      std::string prefix = "dec." + std::to_string(layer);
      Var<Real> h_dst = ad::row_gather(tape, nodes, dst_idx);
      // senders not yet decoded contribute their frozen encoder embedding
      Var<Real> h_src = ad::where_rows(tape, visible,
                                       ad::row_gather(tape, nodes, src_idx),
                                       ad::row_gather(tape, enc.nodes, src_idx));
      Var<Real> m = message_mlp(tape, prefix, {h_dst, h_src, enc.edges, tok_e});
      Var<Real> agg = ad::scale_rows_const(
          tape, ad::scatter_add_rows(tape, m, dst_idx, L), inv_deg);
      nodes = ad::layer_norm(tape, ad::add(tape, nodes, agg), p(prefix + ".ln.g"),
                             p(prefix + ".ln.b"));
    }
    return ad::add_rowvec(tape, ad::matmul(tape, nodes, p("head.w")), p("head.b"));
  }

  // Public form: a partial sequence consistent with a sigma-prefix.
  // known[p] == nullopt marks undecoded positions.
  Var<Real> decode_logits(Tape<Real>& tape, const Encoded<Real>& enc,
                          const std::vector<std::optional<Codon>>& known,
                          const Permutation& sigma) const {
    if (sigma.size() != enc.length)
      throw NotABijection("permutation size " + std::to_string(sigma.size()) + " != L=" +
                          std::to_string(enc.length));
    if (static_cast<int32_t>(known.size()) != enc.length)
      throw LengthMismatch("partial sequence size != L");
    std::vector<int32_t> rank = sigma.ranks();
    // known positions must form a sigma-prefix
    int32_t max_known_rank = -1, min_unknown_rank = enc.length;
    for (int32_t pos = 0; pos < enc.length; ++pos) {
      if (known[pos])
        max_known_rank = std::max(max_known_rank, rank[pos]);
      else
        min_unknown_rank = std::min(min_unknown_rank, rank[pos]);
    }
    if (max_known_rank > min_unknown_rank)
      throw Error(ErrorKind::Data, "known positions are not a prefix of the decoding order");
    std::vector<int> tokens(enc.length, kMaskToken);
    for (int32_t pos = 0; pos < enc.length; ++pos)
      if (known[pos]) tokens[pos] = known[pos]->index();
    return decode_logits_ranked(tape, enc, tokens, rank);
  }

  // ---- scoring -----------------------------------------------------------

  // Teacher-forced log-likelihood under decoding order sigma (default:
  // identity, i.e. left to right). No stop masking: the distribution stays
  // normalized over all 64 classes.
  ScoreResult score(const ResidueGraph& g, int64_t taxon, const CodonSeq& seq,
                    const Permutation* sigma = nullptr) const {
    if (static_cast<int64_t>(seq.size()) != g.length)
      throw LengthMismatch("sequence length " + std::to_string(seq.size()) + " != L=" +
                           std::to_string(g.length));
    Tape<Real> tape(false);
    Encoded<Real> enc = encode(tape, g, taxon);
    return score_with_encoded(tape, enc, seq, sigma);
  }

  // Same, reusing an encoder pass (the encoder does not depend on tokens).
  ScoreResult score_with_encoded(Tape<Real>& tape, const Encoded<Real>& enc, const CodonSeq& seq,
                                 const Permutation* sigma = nullptr) const {
    const int64_t L = enc.length;
    if (static_cast<int64_t>(seq.size()) != L)
      throw LengthMismatch("sequence length " + std::to_string(seq.size()) + " != L=" +
                           std::to_string(L));
    Permutation id = Permutation::identity(static_cast<int32_t>(L));
    const Permutation& sig = sigma ? *sigma : id;
    if (sig.size() != L) throw NotABijection("sigma size != L");
    std::vector<int> tokens(L);
    for (int64_t i = 0; i < L; ++i) tokens[i] = seq[i].index();
    Var<Real> logits = decode_logits_ranked(tape, enc, tokens, sig.ranks());
    ScoreResult result;
    result.per_position.resize(L);
    for (int64_t i = 0; i < L; ++i) {
      const Real* row = logits.value().data() + i * kLogitClasses;
      double lp = static_cast<double>(row[seq[i].index()]) - log_sum_exp(row, kLogitClasses);
      result.per_position[i] = lp;
      result.total_logp += lp;
    }
    return result;
  }

  // ---- sampling ----------------------------------------------------------

  CodonSeq sample(const ResidueGraph& g, int64_t taxon, const SampleOptions& opts) const {
    if (!opts.greedy && !(opts.temperature > 0.0))
      throw InvalidTemperature("temperature must be > 0 (or use greedy mode), got " +
                               std::to_string(opts.temperature));
    const int32_t L = g.length;
    for (const auto& [pos, codon] : opts.fixed)
      if (pos < 0 || pos >= L)
        throw IndexOutOfRange("fixed position " + std::to_string(pos) + " for L=" +
                              std::to_string(L));
    Rng rng(opts.seed);
    Permutation sig = opts.sigma ? *opts.sigma : Permutation::random(L, rng);
    if (sig.size() != L) throw NotABijection("sigma size != L");

    // decode order: fixed positions first (ascending), then free in sigma order
    std::vector<int32_t> decode_order;
    decode_order.reserve(L);
    for (const auto& [pos, codon] : opts.fixed) decode_order.push_back(pos);
    std::vector<int32_t> free_positions;
    for (int32_t pos : sig.order())
      if (!opts.fixed.count(pos)) free_positions.push_back(pos);
    decode_order.insert(decode_order.end(), free_positions.begin(), free_positions.end());

    std::vector<int32_t> rank(L);
    for (int32_t t = 0; t < L; ++t) rank[decode_order[t]] = t;

    std::vector<int> tokens(L, kMaskToken);
    for (const auto& [pos, codon] : opts.fixed) tokens[pos] = codon.index();

    Tape<Real> tape(false);
    Encoded<Real> enc = encode(tape, g, taxon);

    for (int32_t pos : free_positions) {
      Tape<Real> step_tape(false);
      Var<Real> logits = decode_logits_ranked(step_tape, enc, tokens, rank);
      const Real* row = logits.value().data() + static_cast<int64_t>(pos) * kLogitClasses;
      tokens[pos] = opts.greedy ? pick_argmax(row, opts.allow_stop)
                                : pick_sample(row, opts.temperature, opts.allow_stop, rng);
    }

    std::vector<Codon> codons;
    codons.reserve(L);
    for (int32_t i = 0; i < L; ++i) codons.push_back(Codon(tokens[i]));
    return CodonSeq(std::move(codons));
  }

  // ---- checkpointing -----------------------------------------------------

  CheckpointData to_checkpoint(const nlohmann::json& train_meta = {},
                               bool include_optimizer_state = true) const {
    CheckpointData ckpt;
    nlohmann::json cfg;
    cfg["format"] = "codonmpnn-checkpoint";
    cfg["model"] = cfg_.to_json();
    cfg["train"] = train_meta.is_null() ? nlohmann::json::object() : train_meta;
    cfg["train"]["optimizer_step"] = params_.step_count();
    ckpt.config_json = cfg.dump();
    for (const auto& e : params_.entries()) {
      NamedTensorF64 t;
      t.name = e.name;
      t.stored_dtype = dtype_of<Real>();
      t.shape = e.param.shape();
      t.data.assign(e.param.value().begin(), e.param.value().end());
      ckpt.tensors.push_back(std::move(t));
      if (include_optimizer_state) {
        NamedTensorF64 m{"adam.m." + e.name, dtype_of<Real>(), e.param.shape(),
                         std::vector<double>(e.m.begin(), e.m.end())};
        NamedTensorF64 v{"adam.v." + e.name, dtype_of<Real>(), e.param.shape(),
                         std::vector<double>(e.v.begin(), e.v.end())};
        ckpt.tensors.push_back(std::move(m));
        ckpt.tensors.push_back(std::move(v));
      }
    }
    return ckpt;
  }

  // Restores a model (and optimizer moments when present). Returns the
  // "train" metadata blob for the caller.
  static std::pair<CodonMpnn<Real>, nlohmann::json> from_checkpoint(const CheckpointData& ckpt) {
    nlohmann::json cfg = nlohmann::json::parse(ckpt.config_json, nullptr, false);
    if (cfg.is_discarded() || !cfg.contains("model"))
      throw CheckpointError("config blob is not valid checkpoint JSON");
    CodonMpnn<Real> model(ModelConfig::from_json(cfg["model"]), /*seed=*/0);
    std::map<std::string, const NamedTensorF64*> by_name;
    for (const auto& t : ckpt.tensors) by_name[t.name] = &t;
    for (auto& e : model.params_.entries()) {
      auto it = by_name.find(e.name);
      if (it == by_name.end()) throw CheckpointError("checkpoint missing parameter " + e.name);
      const NamedTensorF64& t = *it->second;
      if (t.shape != e.param.shape())
        throw CheckpointError("shape mismatch for " + e.name + ": checkpoint " +
                              shape_str(t.shape) + " vs model " + shape_str(e.param.shape()));
      for (size_t i = 0; i < t.data.size(); ++i)
        e.param.value()[i] = static_cast<Real>(t.data[i]);
      auto mit = by_name.find("adam.m." + e.name);
      auto vit = by_name.find("adam.v." + e.name);
      if (mit != by_name.end() && vit != by_name.end()) {
        for (size_t i = 0; i < t.data.size(); ++i) {
          e.m[i] = static_cast<Real>(mit->second->data[i]);
          e.v[i] = static_cast<Real>(vit->second->data[i]);
        }
      }
    }
    nlohmann::json train_meta = cfg.value("train", nlohmann::json::object());
    if (train_meta.contains("optimizer_step"))
      model.params_.set_step_count(train_meta["optimizer_step"].get<int64_t>());
    return {std::move(model), train_meta};
  }

 private:
  Var<Real> p(const std::string& name) const { return params_.get(name); }

  Var<Real> activation(Tape<Real>& tape, Var<Real> x) const {
    return cfg_.activation == "gelu" ? ad::gelu(tape, x) : ad::relu(tape, x);
  }

  // Three-linear-layer message MLP over the concatenated inputs.
  Var<Real> message_mlp(Tape<Real>& tape, const std::string& prefix,
                        std::vector<Var<Real>> inputs) const {
    Var<Real> x = ad::concat_cols(tape, inputs);
    x = activation(tape, ad::add_rowvec(tape, ad::matmul(tape, x, p(prefix + ".msg.0.w")),
                                        p(prefix + ".msg.0.b")));
    x = activation(tape, ad::add_rowvec(tape, ad::matmul(tape, x, p(prefix + ".msg.1.w")),
                                        p(prefix + ".msg.1.b")));
    return ad::add_rowvec(tape, ad::matmul(tape, x, p(prefix + ".msg.2.w")),
                          p(prefix + ".msg.2.b"));
  }

  static std::pair<std::vector<int64_t>, std::vector<int64_t>> edge_indices(
      const ResidueGraph& g) {
    std::vector<int64_t> dst(g.edge_dst.begin(), g.edge_dst.end());
    std::vector<int64_t> src(g.edge_src.begin(), g.edge_src.end());
    return {std::move(dst), std::move(src)};
  }

  static std::vector<Real> inverse_degrees(const ResidueGraph& g) {
    std::vector<Real> inv(g.length);
    for (int64_t i = 0; i < g.length; ++i)
      inv[i] = Real(1) / static_cast<Real>(g.neighbors[i].size());
    return inv;
  }

  static double log_sum_exp(const Real* row, int n) {
    Real mx = row[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
    double sum = 0;
    for (int j = 0; j < n; ++j) sum += std::exp(static_cast<double>(row[j] - mx));
    return static_cast<double>(mx) + std::log(sum);
  }

  int pick_argmax(const Real* row, bool allow_stop) const {
    int best = -1;
    Real best_v = 0;
    for (int c = 0; c < kLogitClasses; ++c) {
      if (!allow_stop && translate(Codon(c)).is_stop()) continue;
      if (best < 0 || row[c] > best_v) {
        best = c;
        best_v = row[c];
      }
    }
    return best;
  }

  int pick_sample(const Real* row, double temperature, bool allow_stop, Rng& rng) const {
    // softmax(logits / T) with masked stops, then an inverse-CDF draw
    double mx = -std::numeric_limits<double>::infinity();
    std::array<double, kLogitClasses> scaled;
    for (int c = 0; c < kLogitClasses; ++c) {
      if (!allow_stop && translate(Codon(c)).is_stop()) {
        scaled[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      scaled[c] = static_cast<double>(row[c]) / temperature;
      mx = std::max(mx, scaled[c]);
    }
    std::array<double, kLogitClasses> probs;
    double sum = 0;
    for (int c = 0; c < kLogitClasses; ++c) {
      probs[c] = std::isinf(scaled[c]) ? 0.0 : std::exp(scaled[c] - mx);
      sum += probs[c];
    }
    double u = rng.uniform01() * sum;
    double acc = 0;
    for (int c = 0; c < kLogitClasses; ++c) {
      acc += probs[c];
      if (u < acc) return c;
    }
    // numerical tail: return the last unmasked class
    for (int c = kLogitClasses - 1; c >= 0; --c)
      if (probs[c] > 0) return c;
    return 0;
  }

  void init_params(uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    const int64_t h = cfg_.hidden_dim;
    params_.add("edge_embed.w", glorot_uniform<Real>(kEdgeFeatureDim, h, rng));
    params_.add("edge_embed.b", zeros<Real>({h}));
    params_.add("taxon_embed", normal_init<Real>({cfg_.taxon_clusters + 1, h}, 0.1, rng));
    params_.add("taxon_edge_proj.w", glorot_uniform<Real>(h, h, rng));
    params_.add("token_embed", normal_init<Real>({kTokenVocab, h}, 0.1, rng));
    auto add_layer = [&](const std::string& prefix, int64_t in_dim) {
      params_.add(prefix + ".msg.0.w", glorot_uniform<Real>(in_dim, h, rng));
      params_.add(prefix + ".msg.0.b", zeros<Real>({h}));
      params_.add(prefix + ".msg.1.w", glorot_uniform<Real>(h, h, rng));
      params_.add(prefix + ".msg.1.b", zeros<Real>({h}));
      params_.add(prefix + ".msg.2.w", glorot_uniform<Real>(h, h, rng));
      params_.add(prefix + ".msg.2.b", zeros<Real>({h}));
      params_.add(prefix + ".ln.g", ones<Real>({h}));
      params_.add(prefix + ".ln.b", zeros<Real>({h}));
    };
    for (int64_t l = 0; l < cfg_.encoder_layers; ++l)
      add_layer("enc." + std::to_string(l), 3 * h);
    for (int64_t l = 0; l < cfg_.decoder_layers; ++l)
      add_layer("dec." + std::to_string(l), 4 * h);
    params_.add("head.w", glorot_uniform<Real>(h, kLogitClasses, rng));
    params_.add("head.b", zeros<Real>({kLogitClasses}));
  }

  ModelConfig cfg_;
  ParamStore<Real> params_;
};

}  // namespace codonmpnn
