#pragma once

// The 64-codon vocabulary: encoding, standard-code translation, synonymous
// sets, and corpus usage statistics backing the frequency baselines.
//
// Canonical codon indexing: A=0, C=1, G=2, U=3, index = 16*n1 + 4*n2 + n3.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codonmpnn/errors.hpp"

namespace codonmpnn {

inline constexpr int kNumCodons = 64;
inline constexpr char kNucleotides[4] = {'A', 'C', 'G', 'U'};

// Standard genetic code (NCBI translation table 1) in canonical index order.
// '*' is the stop symbol.
inline constexpr std::string_view kCodonToAa =
    "KNKNTTTTRSRSIIMIQHQHPPPPRRRRLLLLEDEDAAAAGGGGVVVV*Y*YSSSS*CWCLFLF";

class AminoAcid {
 public:
  static constexpr char kStop = '*';
  // All 21 values (20 residues + stop), alphabetical with stop last.
  static constexpr std::string_view kAlphabet = "ACDEFGHIKLMNPQRSTVWY*";

  AminoAcid() : code_('A') {}
  explicit AminoAcid(char code) : code_(code) {
    if (kAlphabet.find(code) == std::string_view::npos)
      throw InvalidNucleotide(std::string("not an amino-acid symbol: ") + code);
  }

  char code() const { return code_; }
  bool is_stop() const { return code_ == kStop; }

  friend bool operator==(AminoAcid a, AminoAcid b) { return a.code_ == b.code_; }
  friend bool operator!=(AminoAcid a, AminoAcid b) { return a.code_ != b.code_; }
  friend bool operator<(AminoAcid a, AminoAcid b) { return a.code_ < b.code_; }

 private:
  char code_;
};

class Codon {
 public:
  Codon() : index_(0) {}
  explicit Codon(int index) : index_(static_cast<uint8_t>(index)) {
    if (index < 0 || index >= kNumCodons)
      throw IndexOutOfRange("codon index " + std::to_string(index));
  }

  int index() const { return index_; }

  std::string triplet() const {
    std::string t(3, 'A');
    t[0] = kNucleotides[(index_ >> 4) & 3];
    t[1] = kNucleotides[(index_ >> 2) & 3];
    t[2] = kNucleotides[index_ & 3];
    return t;
  }

  friend bool operator==(Codon a, Codon b) { return a.index_ == b.index_; }
  friend bool operator!=(Codon a, Codon b) { return a.index_ != b.index_; }
  friend bool operator<(Codon a, Codon b) { return a.index_ < b.index_; }

 private:
  uint8_t index_;
};

// Accepts A/C/G/U plus T (DNA input), which is normalized to U.
inline int nucleotide_digit(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'U':
    case 'T': return 3;
    default: throw InvalidNucleotide(std::string("'") + c + "'");
  }
}

inline Codon encode_triplet(std::string_view triplet) {
  if (triplet.size() != 3)
    throw InvalidLength("triplet must have 3 characters, got " + std::to_string(triplet.size()));
  int index = 16 * nucleotide_digit(triplet[0]) + 4 * nucleotide_digit(triplet[1]) +
              nucleotide_digit(triplet[2]);
  return Codon(index);
}

inline AminoAcid translate(Codon codon) { return AminoAcid(kCodonToAa[codon.index()]); }

inline const std::vector<Codon>& synonymous_set(AminoAcid aa) {
  static const std::array<std::vector<Codon>, 21> sets = [] {
    std::array<std::vector<Codon>, 21> s;
    for (int c = 0; c < kNumCodons; ++c) {
      size_t slot = AminoAcid::kAlphabet.find(kCodonToAa[c]);
      s[slot].push_back(Codon(c));
    }
    return s;
  }();
  return sets[AminoAcid::kAlphabet.find(aa.code())];
}

class CodonSeq {
 public:
  CodonSeq() = default;
  explicit CodonSeq(std::vector<Codon> codons) : codons_(std::move(codons)) {
    if (codons_.empty()) throw InvalidLength("codon sequence must be nonempty");
  }

  // Parses a nucleotide string of length 3L (ACGU, T normalized to U).
  static CodonSeq from_nucleotides(std::string_view nt) {
    if (nt.empty() || nt.size() % 3 != 0)
      throw InvalidLength("nucleotide string length " + std::to_string(nt.size()) +
                          " is not a positive multiple of 3");
    std::vector<Codon> codons;
    codons.reserve(nt.size() / 3);
    for (size_t i = 0; i < nt.size(); i += 3) codons.push_back(encode_triplet(nt.substr(i, 3)));
    return CodonSeq(std::move(codons));
  }

  size_t size() const { return codons_.size(); }
  Codon operator[](size_t i) const { return codons_[i]; }
  const std::vector<Codon>& codons() const { return codons_; }

  std::string nucleotides() const {
    std::string nt;
    nt.reserve(3 * codons_.size());
    for (Codon c : codons_) nt += c.triplet();
    return nt;
  }

  friend bool operator==(const CodonSeq& a, const CodonSeq& b) { return a.codons_ == b.codons_; }

 private:
  std::vector<Codon> codons_;
};

// Translates a codon sequence. A trailing stop is stripped; an internal stop
// throws unless allow_internal_stop is set (then it appears as '*').
inline std::string translate_seq(const CodonSeq& seq, bool allow_internal_stop = false) {
  std::string aa;
  aa.reserve(seq.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    AminoAcid a = translate(seq[i]);
    if (a.is_stop()) {
      if (i + 1 == seq.size()) break;  // trailing stop stripped
      if (!allow_internal_stop)
        throw InternalStop("stop codon at position " + std::to_string(i) + " of " +
                           std::to_string(seq.size()));
    }
    aa.push_back(a.code());
  }
  return aa;
}

// Occurrence counts per (amino acid, codon) pair over a corpus. Counting is
// per codon index; the amino-acid grouping is implied by the genetic code.
class UsageTable {
 public:
  UsageTable() { counts_.fill(0); }
  explicit UsageTable(std::string provenance) : provenance_(std::move(provenance)) {
    counts_.fill(0);
  }

  void add(Codon c, uint64_t n = 1) { counts_[c.index()] += n; }
  void merge(const UsageTable& other) {
    for (int i = 0; i < kNumCodons; ++i) counts_[i] += other.counts_[i];
  }

  uint64_t count(Codon c) const { return counts_[c.index()]; }
  uint64_t total_for(AminoAcid aa) const {
    uint64_t t = 0;
    for (Codon c : synonymous_set(aa)) t += counts_[c.index()];
    return t;
  }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  std::array<uint64_t, kNumCodons> counts_;
  std::string provenance_;
};

template <typename Iterable>
UsageTable build_usage_table(const Iterable& corpus, std::string provenance = "") {
  UsageTable table(std::move(provenance));
  size_t n = 0;
  for (const CodonSeq& seq : corpus) {
    ++n;
    for (Codon c : seq.codons()) table.add(c);
  }
  if (n == 0) throw EmptyCorpus("usage table needs at least one sequence");
  return table;
}

// Argmax-count codon among the synonymous set; ties break to the lowest
// codon index. Single-codon amino acids never need usage data.
inline Codon most_frequent_codon(AminoAcid aa, const UsageTable& table) {
  const std::vector<Codon>& set = synonymous_set(aa);
  if (set.size() == 1) return set[0];
  Codon best = set[0];
  uint64_t best_count = table.count(set[0]);
  for (size_t i = 1; i < set.size(); ++i) {
    uint64_t c = table.count(set[i]);
    if (c > best_count) {  // strict: ties keep the lower index
      best = set[i];
      best_count = c;
    }
  }
  if (table.total_for(aa) == 0)
    throw NoUsageData(std::string("no observed codons for amino acid ") + aa.code());
  return best;
}

}  // namespace codonmpnn
