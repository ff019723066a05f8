#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "codonmpnn/genetic_code.hpp"

using namespace codonmpnn;

namespace {

// Oracle: the NCBI translation-table-1 fixture, independent of kCodonToAa.
std::map<std::string, char> load_code_fixture() {
  std::ifstream in(std::string(CODONMPNN_FIXTURE_DIR) + "/standard_genetic_code.tsv");
  REQUIRE(in.good());
  std::map<std::string, char> table;
  std::string triplet;
  char aa;
  while (in >> triplet >> aa) table[triplet] = aa;
  REQUIRE(table.size() == 64);
  return table;
}

}  // namespace

TEST_CASE("encode_triplet canonical indices") {
  CHECK(encode_triplet("AAA").index() == 0);
  CHECK(encode_triplet("UUU").index() == 63);
  CHECK(encode_triplet("AUG").index() == 14);  // 16*0 + 4*3 + 2
  CHECK(encode_triplet("ATG").index() == 14);  // DNA input normalized
  CHECK(encode_triplet("GGA").index() == 40);
}

TEST_CASE("encode_triplet errors") {
  CHECK_THROWS_AS(encode_triplet("AXG"), InvalidNucleotide);
  CHECK_THROWS_AS(encode_triplet("AU"), InvalidLength);
  CHECK_THROWS_AS(encode_triplet("AUGG"), InvalidLength);
  CHECK_THROWS_AS(encode_triplet("aug"), InvalidNucleotide);  // lowercase rejected
}

TEST_CASE("encode/decode bijection over all 64 triplets") {
  std::set<int> seen;
  for (int n1 = 0; n1 < 4; ++n1)
    for (int n2 = 0; n2 < 4; ++n2)
      for (int n3 = 0; n3 < 4; ++n3) {
        std::string t{kNucleotides[n1], kNucleotides[n2], kNucleotides[n3]};
        Codon c = encode_triplet(t);
        CHECK(c.triplet() == t);
        seen.insert(c.index());
      }
  CHECK(seen.size() == 64);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 63);
}

TEST_CASE("translation matches the NCBI fixture for all 64 codons") {
  auto oracle = load_code_fixture();
  for (int i = 0; i < kNumCodons; ++i) {
    Codon c(i);
    CHECK(translate(c).code() == oracle.at(c.triplet()));
  }
}

TEST_CASE("translate spot values") {
  CHECK(translate(encode_triplet("AUG")).code() == 'M');
  CHECK(translate(encode_triplet("UAA")).is_stop());
  CHECK(translate(encode_triplet("GGA")).code() == 'G');
  CHECK(translate(encode_triplet("GGU")).code() == 'G');
}

TEST_CASE("synonymous sets partition the 64 codons") {
  std::set<int> all;
  for (char sym : AminoAcid::kAlphabet) {
    for (Codon c : synonymous_set(AminoAcid(sym))) {
      CHECK(all.insert(c.index()).second);  // pairwise disjoint
      CHECK(translate(c) == AminoAcid(sym));
    }
  }
  CHECK(all.size() == 64);
  for (int i = 0; i < kNumCodons; ++i) {
    // every codon belongs to the set of its own amino acid
    const auto& set = synonymous_set(translate(Codon(i)));
    CHECK(std::find(set.begin(), set.end(), Codon(i)) != set.end());
  }
}

TEST_CASE("exactly 21 distinct amino-acid values") {
  std::set<char> symbols;
  for (int i = 0; i < kNumCodons; ++i) symbols.insert(translate(Codon(i)).code());
  CHECK(symbols.size() == 21);
  CHECK(symbols.count('*') == 1);
}

TEST_CASE("translate_seq") {
  CodonSeq mw({encode_triplet("AUG"), encode_triplet("UGG")});
  CHECK(translate_seq(mw) == "MW");

  CodonSeq m_stop({encode_triplet("AUG"), encode_triplet("UAA")});
  CHECK(translate_seq(m_stop) == "M");  // trailing stop stripped

  CodonSeq internal({encode_triplet("UAA"), encode_triplet("AUG")});
  CHECK_THROWS_AS(translate_seq(internal, false), InternalStop);
  CHECK(translate_seq(internal, true) == "*M");
}

TEST_CASE("codon sequence nucleotide round trip") {
  CodonSeq seq = CodonSeq::from_nucleotides("AUGGGAUUU");
  CHECK(seq.size() == 3);
  CHECK(seq.nucleotides() == "AUGGGAUUU");
  CHECK(CodonSeq::from_nucleotides("ATGGGATTT") == seq);  // DNA normalized
  CHECK_THROWS_AS(CodonSeq::from_nucleotides("AUGG"), InvalidLength);
  CHECK_THROWS_AS(CodonSeq::from_nucleotides(""), InvalidLength);
}

TEST_CASE("usage table counting") {
  std::vector<CodonSeq> corpus{CodonSeq::from_nucleotides("GGAGGAGGU")};
  UsageTable table = build_usage_table(corpus, "test");
  CHECK(table.count(encode_triplet("GGA")) == 2);
  CHECK(table.count(encode_triplet("GGU")) == 1);
  CHECK(table.count(encode_triplet("GGG")) == 0);
  CHECK(table.total_for(AminoAcid('G')) == 3);
  CHECK(table.provenance() == "test");

  std::vector<CodonSeq> one{CodonSeq::from_nucleotides("AUG")};
  UsageTable met = build_usage_table(one);
  CHECK(met.count(encode_triplet("AUG")) == 1);
  CHECK(met.total_for(AminoAcid('G')) == 0);

  std::vector<CodonSeq> empty;
  CHECK_THROWS_AS(build_usage_table(empty), EmptyCorpus);
}

TEST_CASE("most_frequent_codon") {
  std::vector<CodonSeq> corpus{CodonSeq::from_nucleotides("GGAGGAGGU")};
  UsageTable table = build_usage_table(corpus);
  CHECK(most_frequent_codon(AminoAcid('G'), table) == encode_triplet("GGA"));
  // single-codon amino acids never need usage data
  CHECK(most_frequent_codon(AminoAcid('M'), table) == encode_triplet("AUG"));
  CHECK(most_frequent_codon(AminoAcid('W'), table) == encode_triplet("UGG"));
  // unobserved multi-codon amino acid
  CHECK_THROWS_AS(most_frequent_codon(AminoAcid('L'), table), NoUsageData);
}

TEST_CASE("most_frequent_codon tie-break by lowest index") {
  // one GGA and one GGU: tie broken toward the lower codon index (GGA=40 < GGU=43)
  std::vector<CodonSeq> corpus{CodonSeq::from_nucleotides("GGA"), CodonSeq::from_nucleotides("GGU")};
  UsageTable table = build_usage_table(corpus);
  CHECK(most_frequent_codon(AminoAcid('G'), table) == encode_triplet("GGA"));
}

TEST_CASE("round trip: most frequent codon re-translates to the same amino acid") {
  // property over every amino acid, with a usage table covering all codons
  std::vector<CodonSeq> corpus;
  for (int i = 0; i < kNumCodons; ++i)
    corpus.push_back(CodonSeq({Codon(i)}));
  UsageTable table = build_usage_table(corpus);
  for (char sym : AminoAcid::kAlphabet) {
    if (sym == AminoAcid::kStop) continue;
    AminoAcid aa(sym);
    CHECK(translate(most_frequent_codon(aa, table)) == aa);
  }
}
