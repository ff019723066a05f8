#pragma once

// Evaluation metrics: codon/amino-acid recovery, the frequency-baseline
// recoveries (naive: from generated amino acids; oracle: from the true
// ones), per-amino-acid breakdowns, and synonymous-pair likelihood ranking.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "codonmpnn/genetic_code.hpp"
#include "codonmpnn/model.hpp"
#include "codonmpnn/util.hpp"

namespace codonmpnn {

inline double codon_recovery(const CodonSeq& gen, const CodonSeq& wt) {
  if (gen.size() != wt.size())
    throw LengthMismatch("generated length " + std::to_string(gen.size()) + " vs wild-type " +
                         std::to_string(wt.size()));
  int64_t matches = 0;
  for (size_t i = 0; i < gen.size(); ++i)
    if (gen[i] == wt[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(gen.size());
}

inline double aa_recovery(const CodonSeq& gen, const CodonSeq& wt) {
  if (gen.size() != wt.size())
    throw LengthMismatch("generated length " + std::to_string(gen.size()) + " vs wild-type " +
                         std::to_string(wt.size()));
  int64_t matches = 0;
  for (size_t i = 0; i < gen.size(); ++i)
    if (translate(gen[i]) == translate(wt[i])) ++matches;
  return static_cast<double>(matches) / static_cast<double>(gen.size());
}

// Recovery of the "translate, then pick the most frequent codon" strategy
// applied to the generated amino acids.
inline double naive_codon_recovery(const CodonSeq& gen, const CodonSeq& wt,
                                   const UsageTable& usage) {
  if (gen.size() != wt.size())
    throw LengthMismatch("generated length " + std::to_string(gen.size()) + " vs wild-type " +
                         std::to_string(wt.size()));
  int64_t matches = 0;
  for (size_t i = 0; i < gen.size(); ++i)
    if (most_frequent_codon(translate(gen[i]), usage) == wt[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(gen.size());
}

// Same strategy applied to the true amino acids: the ceiling for any
// frequency-based codon choice.
inline double oracle_codon_recovery(const CodonSeq& wt, const UsageTable& usage) {
  if (wt.size() == 0) throw InvalidLength("wild type must be nonempty");
  int64_t matches = 0;
  for (size_t i = 0; i < wt.size(); ++i)
    if (most_frequent_codon(translate(wt[i]), usage) == wt[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(wt.size());
}

struct PerAaCounts {
  int64_t support = 0;
  int64_t codon_matches = 0;
  int64_t aa_matches = 0;
  int64_t naive_matches = 0;
  int64_t oracle_matches = 0;
};

struct RecoveryReport {
  int64_t total_positions = 0;
  double codon_recovery = 0.0;
  double aa_recovery = 0.0;
  double naive_codon_recovery = 0.0;
  double oracle_codon_recovery = 0.0;
  // keyed by the wild-type amino acid at each position
  std::map<char, PerAaCounts> per_aa;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["total_positions"] = total_positions;
    j["codon_recovery"] = codon_recovery;
    j["aa_recovery"] = aa_recovery;
    j["naive_codon_recovery"] = naive_codon_recovery;
    j["oracle_codon_recovery"] = oracle_codon_recovery;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [aa, c] : per_aa) {
      double s = static_cast<double>(c.support);
      per[std::string(1, aa)] = {{"support", c.support},
                                 {"codon_recovery", c.codon_matches / s},
                                 {"aa_recovery", c.aa_matches / s},
                                 {"naive_codon_recovery", c.naive_matches / s},
                                 {"oracle_codon_recovery", c.oracle_matches / s}};
    }
    j["per_aa"] = per;
    return j;
  }
};

// Accumulates (generated, wild-type) pairs into a report. Per-amino-acid
// rows bucket positions by the wild-type amino acid, so supports sum to the
// total and the weighted per-aa means re-aggregate to the global numbers
// exactly.
class RecoveryAccumulator {
 public:
  explicit RecoveryAccumulator(const UsageTable& usage) : usage_(usage) {}

  void add(const CodonSeq& gen, const CodonSeq& wt) {
    if (gen.size() != wt.size())
      throw LengthMismatch("generated length " + std::to_string(gen.size()) + " vs wild-type " +
                           std::to_string(wt.size()));
    for (size_t i = 0; i < gen.size(); ++i) {
      AminoAcid wt_aa = translate(wt[i]);
      PerAaCounts& c = per_aa_[wt_aa.code()];
      ++c.support;
      if (gen[i] == wt[i]) ++c.codon_matches;
      if (translate(gen[i]) == wt_aa) ++c.aa_matches;
      if (most_frequent_codon(translate(gen[i]), usage_) == wt[i]) ++c.naive_matches;
      if (most_frequent_codon(wt_aa, usage_) == wt[i]) ++c.oracle_matches;
    }
  }

  RecoveryReport report() const {
    RecoveryReport r;
    int64_t codon = 0, aa = 0, naive = 0, oracle = 0;
    for (const auto& [sym, c] : per_aa_) {
      r.total_positions += c.support;
      codon += c.codon_matches;
      aa += c.aa_matches;
      naive += c.naive_matches;
      oracle += c.oracle_matches;
    }
    if (r.total_positions == 0) throw EmptyCorpus("no positions accumulated");
    double n = static_cast<double>(r.total_positions);
    r.codon_recovery = codon / n;
    r.aa_recovery = aa / n;
    r.naive_codon_recovery = naive / n;
    r.oracle_codon_recovery = oracle / n;
    r.per_aa = per_aa_;
    return r;
  }

 private:
  UsageTable usage_;
  std::map<char, PerAaCounts> per_aa_;
};

// Validates that the per-aa rows re-aggregate (support-weighted) to the
// global fractions. Exact identity on counts; used by --self-check.
inline bool report_self_check(const RecoveryReport& r) {
  int64_t support = 0, codon = 0, aa = 0, naive = 0, oracle = 0;
  for (const auto& [sym, c] : r.per_aa) {
    support += c.support;
    codon += c.codon_matches;
    aa += c.aa_matches;
    naive += c.naive_matches;
    oracle += c.oracle_matches;
  }
  auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  double n = static_cast<double>(support);
  return support == r.total_positions && close(codon / n, r.codon_recovery) &&
         close(aa / n, r.aa_recovery) && close(naive / n, r.naive_codon_recovery) &&
         close(oracle / n, r.oracle_codon_recovery);
}

// TSV with one row per observed wild-type amino acid, for external plotting.
inline void write_per_aa_tsv(std::ostream& out, const RecoveryReport& r) {
  out << "aa\tcodon_rec\taa_rec\tnaive\toracle\tsupport\n";
  for (const auto& [aa, c] : r.per_aa) {
    double s = static_cast<double>(c.support);
    out << aa << "\t" << c.codon_matches / s << "\t" << c.aa_matches / s << "\t"
        << c.naive_matches / s << "\t" << c.oracle_matches / s << "\t" << c.support << "\n";
  }
}

// ---------------------------------------------------------------------------
// Synonymous pairs: same protein, different codons, distinct fitness.
// ---------------------------------------------------------------------------

struct SynonymousPair {
  std::string id;
  std::string structure_id;  // record id of the conditioning structure
  CodonSeq wt;
  CodonSeq mut;
  double wt_fitness = 0.0;
  double mut_fitness = 0.0;

  void validate() const {
    if (wt.size() != mut.size())
      throw InvalidPair(id + ": sequences differ in length");
    if (wt == mut) throw InvalidPair(id + ": sequences are identical");
    if (translate_seq(wt, true) != translate_seq(mut, true))
      throw InvalidPair(id + ": sequences are not synonymous");
    if (wt_fitness == mut_fitness) throw InvalidPair(id + ": tied fitness values");
  }

  double abs_fitness_effect() const { return std::abs(wt_fitness - mut_fitness); }
};

inline std::vector<SynonymousPair> read_pairs(std::istream& in) {
  std::vector<SynonymousPair> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw SchemaError("pairs line " + std::to_string(line_no) + ": invalid JSON");
    SynonymousPair p;
    try {
      p.id = j.at("id").get<std::string>();
      p.wt = CodonSeq::from_nucleotides(j.at("wt_codons").get<std::string>());
      p.mut = CodonSeq::from_nucleotides(j.at("mut_codons").get<std::string>());
      p.wt_fitness = j.at("wt_fitness").get<double>();
      p.mut_fitness = j.at("mut_fitness").get<double>();
      p.structure_id = j.value("structure_id", p.id);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("pairs line " + std::to_string(line_no) + ": " + e.what());
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

// The paper-style top-N selection by absolute fitness effect.
inline std::vector<SynonymousPair> select_top_pairs(std::vector<SynonymousPair> pairs, size_t n) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const SynonymousPair& a, const SynonymousPair& b) {
    return a.abs_fitness_effect() > b.abs_fitness_effect();
  });
  if (pairs.size() > n) pairs.resize(n);
  return pairs;
}

struct PairVerdict {
  std::string id;
  double delta_loglik = 0.0;  // higher-fitness minus lower-fitness sequence
  double delta_fitness = 0.0;  // always positive
  bool correct = false;
};

struct PairEvalResult {
  double fraction_correct = 0.0;
  std::vector<PairVerdict> verdicts;
};

// A pair counts as correct when the model assigns the higher-fitness
// sequence the higher log-likelihood. Both sequences are scored under the
// same structure, taxon, and decoding order.
template <typename Real>
PairEvalResult synonymous_pair_eval(const CodonMpnn<Real>& model,
                                    const std::vector<SynonymousPair>& pairs,
                                    const std::vector<const ResidueGraph*>& graphs,
                                    const std::vector<int64_t>& taxa,
                                    const Permutation* sigma = nullptr, int threads = 1) {
  if (pairs.size() != graphs.size() || pairs.size() != taxa.size())
    throw InvalidPair("pairs, graphs, and taxa must align");
  PairEvalResult result;
  result.verdicts.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](size_t i) {
    const SynonymousPair& p = pairs[i];
    p.validate();
    const bool wt_is_high = p.wt_fitness > p.mut_fitness;
    const CodonSeq& high = wt_is_high ? p.wt : p.mut;
    const CodonSeq& low = wt_is_high ? p.mut : p.wt;
    Tape<Real> tape(false);
    Encoded<Real> enc = model.encode(tape, *graphs[i], taxa[i]);
    double ll_high = model.score_with_encoded(tape, enc, high, sigma).total_logp;
    double ll_low = model.score_with_encoded(tape, enc, low, sigma).total_logp;
    PairVerdict v;
    v.id = p.id;
    v.delta_loglik = ll_high - ll_low;
    v.delta_fitness = std::abs(p.wt_fitness - p.mut_fitness);
    v.correct = ll_high > ll_low;
    result.verdicts[i] = v;
  });
  int64_t correct = 0;
  for (const auto& v : result.verdicts)
    if (v.correct) ++correct;
  result.fraction_correct = pairs.empty() ? 0.0
                                          : static_cast<double>(correct) /
                                                static_cast<double>(pairs.size());
  return result;
}

inline void write_pair_tsv(std::ostream& out, const PairEvalResult& result) {
  out << "pair_id\tdll\tdfitness\tcorrect\n";
  for (const auto& v : result.verdicts)
    out << v.id << "\t" << v.delta_loglik << "\t" << v.delta_fitness << "\t"
        << (v.correct ? 1 : 0) << "\n";
}

}  // namespace codonmpnn
