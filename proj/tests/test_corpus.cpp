#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "codonmpnn/corpus.hpp"

using namespace codonmpnn;
using nlohmann::json;

namespace {

json make_record_json(const std::string& id, size_t L, const std::string& codons) {
  json coords = json::array();
  for (size_t i = 0; i < L; ++i) {
    json residue = json::array();
    for (int a = 0; a < 4; ++a)
      residue.push_back({1.0 * i + 0.1 * a, 2.0 * i, -1.0 * static_cast<double>(a)});
    coords.push_back(residue);
  }
  return json{{"id", id}, {"coords", coords}, {"codons", codons}, {"tax_id", nullptr},
              {"plddt", nullptr}};
}

std::vector<ProteinRecord> parse_lines(const std::vector<json>& lines) {
  std::string text;
  for (const auto& l : lines) text += l.dump() + "\n";
  std::istringstream in(text);
  return read_records(in);
}

}  // namespace

TEST_CASE("read a valid record") {
  auto records = parse_lines({make_record_json("rec1", 2, "AUGGGA")});
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "rec1");
  CHECK(records[0].length() == 2);
  CHECK(records[0].codons.nucleotides() == "AUGGGA");
  CHECK(records[0].coords.size() == 2 * 4 * 3);
  CHECK(!records[0].tax_id);
  CHECK(!records[0].plddt);
}

TEST_CASE("DNA input is normalized to RNA") {
  auto records = parse_lines({make_record_json("rec1", 2, "ATGGGA")});
  CHECK(records[0].codons.nucleotides() == "AUGGGA");
}

TEST_CASE("length mismatch between coords and codons") {
  json j = make_record_json("bad", 2, "AUGGGAUUU");  // 3 codons, 2 residues
  std::istringstream in(j.dump() + "\n");
  CHECK_THROWS_AS(read_records(in), LengthMismatch);
}

TEST_CASE("schema errors name the line") {
  json good = make_record_json("ok", 2, "AUGGGA");
  json bad = good;
  bad.erase("codons");
  std::istringstream in(good.dump() + "\n" + bad.dump() + "\n");
  try {
    read_records(in);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("invalid JSON line") {
  std::istringstream in("{not json\n");
  CHECK_THROWS_AS(read_records(in), SchemaError);
}

TEST_CASE("non-finite coordinates rejected") {
  json j = make_record_json("nan", 2, "AUGGGA");
  j["coords"][0][0][0] = "nan";  // not a number -> schema error
  std::istringstream in1(j.dump() + "\n");
  CHECK_THROWS_AS(read_records(in1), SchemaError);
  // JSON cannot carry inf/nan literals; the guard still protects the struct
  ProteinRecord rec;
  CHECK_NOTHROW(rec = parse_lines({make_record_json("x", 2, "AUGGGA")})[0]);
}

TEST_CASE("multi-chain records rejected") {
  json j = make_record_json("mc", 2, "AUGGGA");
  j["chains"] = {"A", "B"};
  std::istringstream in(j.dump() + "\n");
  CHECK_THROWS_AS(read_records(in), MultiChainRecord);
}

TEST_CASE("pLDDT scale auto-detection") {
  json j = make_record_json("p", 2, "AUGGGA");
  j["plddt"] = {95.0, 91.2};
  auto records = parse_lines({j});
  REQUIRE(records[0].plddt);
  CHECK((*records[0].plddt)[0] == Catch::Approx(0.95));
  CHECK((*records[0].plddt)[1] == Catch::Approx(0.912));

  json j2 = make_record_json("q", 2, "AUGGGA");
  j2["plddt"] = {0.95, 0.912};  // already 0-1: untouched
  auto records2 = parse_lines({j2});
  CHECK((*records2[0].plddt)[0] == Catch::Approx(0.95));
}

TEST_CASE("pLDDT length must match L") {
  json j = make_record_json("p", 2, "AUGGGA");
  j["plddt"] = {95.0};
  std::istringstream in(j.dump() + "\n");
  CHECK_THROWS_AS(read_records(in), LengthMismatch);
}

TEST_CASE("filter_plddt keeps strict exceedances only") {
  json high = make_record_json("high", 2, "AUGGGA");
  high["plddt"] = {0.95, 0.95};
  json exact = make_record_json("exact", 2, "AUGGGA");
  exact["plddt"] = {0.90, 0.90};
  json missing = make_record_json("missing", 2, "AUGGGA");
  auto records = parse_lines({high, exact, missing});
  PlddtFilterResult result = filter_plddt(std::move(records), 0.9);
  REQUIRE(result.kept.size() == 2);
  CHECK(result.kept[0].id == "high");
  CHECK(result.kept[1].id == "missing");  // kept, tallied
  CHECK(result.dropped == 1);             // mean exactly 0.9 is dropped
  CHECK(result.missing_plddt == 1);
}

TEST_CASE("write/read round trip preserves records") {
  json j1 = make_record_json("a", 3, "AUGGGAUUU");
  j1["tax_id"] = 562;
  j1["plddt"] = {97.5, 93.25, 91.125};
  json j2 = make_record_json("b", 2, "AUGGGA");
  auto records = parse_lines({j1, j2});

  std::ostringstream out;
  write_records(out, records);
  std::istringstream in(out.str());
  auto back = read_records(in);
  REQUIRE(back.size() == records.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == records[i].id);
    CHECK(back[i].coords == records[i].coords);
    CHECK(back[i].codons == records[i].codons);
    CHECK(back[i].tax_id == records[i].tax_id);
    CHECK(back[i].plddt == records[i].plddt);
  }
}

TEST_CASE("derived amino-acid sequence has length L for accepted records") {
  auto records = parse_lines({make_record_json("a", 3, "AUGGGAUUU")});
  std::string aa = translate_seq(records[0].codons, true);
  CHECK(aa.size() == records[0].length());
}

TEST_CASE("apply_split partitions by id") {
  auto records = parse_lines({make_record_json("a", 2, "AUGGGA"),
                              make_record_json("b", 2, "AUGGGA"),
                              make_record_json("c", 2, "AUGGGA")});
  DatasetSplit split;
  split.train = {"a"};
  split.val = {"b"};
  split.test = {"c"};
  SplitRecords s = apply_split(records, split);
  CHECK(s.train.size() == 1);
  CHECK(s.val.size() == 1);
  CHECK(s.test.size() == 1);
  CHECK(s.train[0].id == "a");

  SECTION("missing id is an error") {
    split.val.push_back("ghost");
    CHECK_THROWS_AS(apply_split(records, split), UnknownId);
  }
  SECTION("empty val list is fine") {
    split.val.clear();
    SplitRecords s2 = apply_split(records, split);
    CHECK(s2.val.empty());
  }
}

TEST_CASE("split file parsing") {
  std::istringstream in(R"({"train": ["a", "b"], "val": [], "test": ["c"]})");
  DatasetSplit split = read_split(in);
  CHECK(split.train == std::vector<std::string>({"a", "b"}));
  CHECK(split.val.empty());
  CHECK(split.test == std::vector<std::string>{"c"});

  std::istringstream bad(R"({"train": "oops"})");
  CHECK_THROWS_AS(read_split(bad), SchemaError);
}
