#pragma once

// Training records: backbone coordinates paired with wild-type codon
// sequences and taxon ids, stored as JSONL. One record per line:
//   {"id": str, "coords": [[[x,y,z] x4] xL], "codons": str(3L),
//    "tax_id": int|null, "plddt": [L floats]|null}

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "codonmpnn/errors.hpp"
#include "codonmpnn/genetic_code.hpp"
#include "codonmpnn/taxonomy.hpp"
#include "codonmpnn/util.hpp"

namespace codonmpnn {

inline constexpr int kBackboneAtoms = 4;  // N, CA, C, O

struct ProteinRecord {
  std::string id;
  // [L][4][3] flattened row-major: coords[(i*4 + atom)*3 + xyz]
  std::vector<double> coords;
  CodonSeq codons;
  std::optional<TaxId> tax_id;
  std::optional<std::vector<double>> plddt;  // normalized to [0,1]

  size_t length() const { return codons.size(); }

  double coord(size_t residue, int atom, int xyz) const {
    return coords[(residue * kBackboneAtoms + atom) * 3 + xyz];
  }

  double mean_plddt() const {
    if (!plddt || plddt->empty()) return 0.0;
    double sum = 0.0;
    for (double v : *plddt) sum += v;
    return sum / static_cast<double>(plddt->size());
  }
};

namespace detail {

inline ProteinRecord record_from_json(const nlohmann::json& j, size_t line_no) {
  auto fail = [line_no](const std::string& msg) -> SchemaError {
    return SchemaError("line " + std::to_string(line_no) + ": " + msg);
  };
  if (!j.is_object()) throw fail("record is not a JSON object");
  if (j.contains("chains") || j.contains("chain_ids"))
    throw MultiChainRecord("line " + std::to_string(line_no) +
                           ": multi-chain records are not supported");
  for (const char* key : {"id", "coords", "codons"})
    if (!j.contains(key)) throw fail(std::string("missing field \"") + key + "\"");

  ProteinRecord rec;
  if (!j["id"].is_string()) throw fail("\"id\" must be a string");
  rec.id = j["id"].get<std::string>();

  if (!j["codons"].is_string()) throw fail("\"codons\" must be a string");
  try {
    rec.codons = CodonSeq::from_nucleotides(j["codons"].get<std::string>());
  } catch (const Error& e) {
    throw fail(std::string("bad codon string: ") + e.what());
  }
  const size_t L = rec.codons.size();

  const auto& coords = j["coords"];
  if (!coords.is_array() || coords.size() != L)
    throw LengthMismatch("line " + std::to_string(line_no) + ": coords has " +
                         std::to_string(coords.size()) + " residues but codons imply " +
                         std::to_string(L));
  rec.coords.reserve(L * kBackboneAtoms * 3);
  for (const auto& residue : coords) {
    if (!residue.is_array() || residue.size() != kBackboneAtoms)
      throw fail("each residue needs exactly 4 backbone atoms");
    for (const auto& atom : residue) {
      if (!atom.is_array() || atom.size() != 3) throw fail("each atom needs [x,y,z]");
      for (const auto& v : atom) {
        if (!v.is_number()) throw fail("coordinates must be numbers");
        double x = v.get<double>();
        if (!std::isfinite(x))
          throw NonFiniteCoordinate("line " + std::to_string(line_no) + ", record " + rec.id);
        rec.coords.push_back(x);
      }
    }
  }

  if (j.contains("tax_id") && !j["tax_id"].is_null()) {
    if (!j["tax_id"].is_number_integer()) throw fail("\"tax_id\" must be an integer or null");
    rec.tax_id = j["tax_id"].get<TaxId>();
  }

  if (j.contains("plddt") && !j["plddt"].is_null()) {
    const auto& pl = j["plddt"];
    if (!pl.is_array()) throw fail("\"plddt\" must be an array or null");
    if (pl.size() != L)
      throw LengthMismatch("line " + std::to_string(line_no) + ": plddt has " +
                           std::to_string(pl.size()) + " values for L=" + std::to_string(L));
    std::vector<double> values;
    values.reserve(L);
    double max_v = 0.0;
    for (const auto& v : pl) {
      if (!v.is_number()) throw fail("plddt values must be numbers");
      double x = v.get<double>();
      if (!std::isfinite(x) || x < 0.0 || x > 100.0)
        throw fail("plddt values must be finite and within [0,100]");
      max_v = std::max(max_v, x);
      values.push_back(x);
    }
    // Values above 1.5 imply the 0-100 scale.
    if (max_v > 1.5)
      for (double& x : values) x /= 100.0;
    rec.plddt = std::move(values);
  }
  return rec;
}

inline nlohmann::json record_to_json(const ProteinRecord& rec) {
  nlohmann::json j;
  j["id"] = rec.id;
  nlohmann::json coords = nlohmann::json::array();
  for (size_t i = 0; i < rec.length(); ++i) {
    nlohmann::json residue = nlohmann::json::array();
    for (int a = 0; a < kBackboneAtoms; ++a)
      residue.push_back({rec.coord(i, a, 0), rec.coord(i, a, 1), rec.coord(i, a, 2)});
    coords.push_back(std::move(residue));
  }
  j["coords"] = std::move(coords);
  j["codons"] = rec.codons.nucleotides();
  j["tax_id"] = rec.tax_id ? nlohmann::json(*rec.tax_id) : nlohmann::json(nullptr);
  j["plddt"] = rec.plddt ? nlohmann::json(*rec.plddt) : nlohmann::json(nullptr);
  return j;
}

}  // namespace detail

inline std::vector<ProteinRecord> read_records(std::istream& in) {
  std::vector<ProteinRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw SchemaError("line " + std::to_string(line_no) + ": invalid JSON");
    records.push_back(detail::record_from_json(j, line_no));
  }
  return records;
}

inline std::vector<ProteinRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  return read_records(in);
}

inline void write_records(std::ostream& out, const std::vector<ProteinRecord>& records) {
  for (const auto& rec : records) out << detail::record_to_json(rec).dump() << "\n";
}

struct PlddtFilterResult {
  std::vector<ProteinRecord> kept;
  size_t dropped = 0;
  size_t missing_plddt = 0;  // kept, but tallied
};

// Keeps records whose mean pLDDT strictly exceeds the threshold. Records
// without pLDDT are kept and counted.
inline PlddtFilterResult filter_plddt(std::vector<ProteinRecord> records, double threshold = 0.9) {
  PlddtFilterResult result;
  for (auto& rec : records) {
    if (!rec.plddt) {
      ++result.missing_plddt;
      result.kept.push_back(std::move(rec));
    } else if (rec.mean_plddt() > threshold) {
      result.kept.push_back(std::move(rec));
    } else {
      ++result.dropped;
    }
  }
  if (result.missing_plddt > 0)
    CODONMPNN_LOG_WARN("filter_plddt: %zu records lack pLDDT and were kept",
                       result.missing_plddt);
  return result;
}

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

inline DatasetSplit read_split(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw SchemaError("split file: invalid JSON object");
  DatasetSplit split;
  auto read_list = [&](const char* key, std::vector<std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw SchemaError(std::string("split file: \"") + key + "\" must be a list");
    for (const auto& v : j[key]) {
      if (!v.is_string()) throw SchemaError(std::string("split file: ids in \"") + key + "\" must be strings");
      out.push_back(v.get<std::string>());
    }
  };
  read_list("train", split.train);
  read_list("val", split.val);
  read_list("test", split.test);
  return split;
}

struct SplitRecords {
  std::vector<ProteinRecord> train;
  std::vector<ProteinRecord> val;
  std::vector<ProteinRecord> test;
};

// Partitions records by id, preserving input order within each set.
inline SplitRecords apply_split(const std::vector<ProteinRecord>& records,
                                const DatasetSplit& split) {
  std::unordered_set<std::string> known;
  for (const auto& rec : records) known.insert(rec.id);
  std::string missing;
  auto check = [&](const std::vector<std::string>& ids) {
    for (const auto& id : ids)
      if (!known.count(id)) missing += (missing.empty() ? "" : ", ") + id;
  };
  check(split.train);
  check(split.val);
  check(split.test);
  if (!missing.empty()) throw UnknownId("split references absent record ids: " + missing);

  std::unordered_set<std::string> train_ids(split.train.begin(), split.train.end());
  std::unordered_set<std::string> val_ids(split.val.begin(), split.val.end());
  std::unordered_set<std::string> test_ids(split.test.begin(), split.test.end());
  SplitRecords out;
  for (const auto& rec : records) {
    if (train_ids.count(rec.id)) out.train.push_back(rec);
    if (val_ids.count(rec.id)) out.val.push_back(rec);
    if (test_ids.count(rec.id)) out.test.push_back(rec);
  }
  return out;
}

}  // namespace codonmpnn
