#pragma once

#include <stdexcept>
#include <string>

namespace codonmpnn {

// Coarse failure class, used by the CLI to pick an exit code.
enum class ErrorKind {
  Parse,    // malformed input file
  Data,     // structurally valid input that violates a contract
  Config,   // incompatible configuration
  Numeric,  // non-finite values, shape mismatches
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define CODONMPNN_ERROR_TYPE(Name, Kind)                                  \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, std::string(#Name) + ": " + what) {} \
  }

// genetic_code
CODONMPNN_ERROR_TYPE(InvalidNucleotide, Data);
CODONMPNN_ERROR_TYPE(InvalidLength, Data);
CODONMPNN_ERROR_TYPE(InternalStop, Data);
CODONMPNN_ERROR_TYPE(EmptyCorpus, Data);
CODONMPNN_ERROR_TYPE(NoUsageData, Data);

// taxonomy
CODONMPNN_ERROR_TYPE(ParseError, Parse);
CODONMPNN_ERROR_TYPE(OrphanNode, Parse);
CODONMPNN_ERROR_TYPE(CycleDetected, Parse);
CODONMPNN_ERROR_TYPE(InvalidK, Config);

// corpus
CODONMPNN_ERROR_TYPE(SchemaError, Data);
CODONMPNN_ERROR_TYPE(LengthMismatch, Data);
CODONMPNN_ERROR_TYPE(NonFiniteCoordinate, Data);
CODONMPNN_ERROR_TYPE(UnknownId, Data);
CODONMPNN_ERROR_TYPE(MultiChainRecord, Data);

// featurize
CODONMPNN_ERROR_TYPE(DegenerateStructure, Data);
CODONMPNN_ERROR_TYPE(IndexOutOfRange, Data);

// numerics
CODONMPNN_ERROR_TYPE(ShapeMismatch, Numeric);
CODONMPNN_ERROR_TYPE(NonFiniteValue, Numeric);

// model
CODONMPNN_ERROR_TYPE(ConfigMismatch, Config);
CODONMPNN_ERROR_TYPE(NotABijection, Data);
CODONMPNN_ERROR_TYPE(InvalidTemperature, Config);
CODONMPNN_ERROR_TYPE(CheckpointError, Parse);

// train / evaluate
CODONMPNN_ERROR_TYPE(EmptyValSet, Data);
CODONMPNN_ERROR_TYPE(InvalidPair, Data);

#undef CODONMPNN_ERROR_TYPE

}  // namespace codonmpnn
