#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace merit {

// Exit-code buckets surfaced by the CLI: 2 config, 3 data, 4 numeric.
enum class ErrorKind { Config = 2, Data = 3, Numeric = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorKind::Data, w) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorKind::Numeric, w) {}
};

// csv / ingest
struct MissingColumn : DataError {
  explicit MissingColumn(const std::string& name)
      : DataError("missing column: " + name), column(name) {}
  std::string column;
};
struct MalformedRow : DataError {
  explicit MalformedRow(std::size_t line, const std::string& why)
      : DataError("malformed row at line " + std::to_string(line) + ": " + why),
        line_no(line) {}
  std::size_t line_no;
};
struct EncodingError : DataError {
  explicit EncodingError(std::size_t offset)
      : DataError("invalid UTF-8 at byte offset " + std::to_string(offset)),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

// text / linalg
struct ZeroVector : DataError {
  ZeroVector() : DataError("cosine similarity of a zero vector") {}
};
struct RankTooLarge : DataError {
  explicit RankTooLarge(const std::string& w) : DataError(w) {}
};
struct EmptyMatrix : DataError {
  EmptyMatrix() : DataError("matrix has no nonzero entries") {}
};
struct NonFiniteInput : NumericError {
  NonFiniteInput() : NumericError("non-finite input") {}
};

// featurize
struct EmptyCorpus : DataError {
  EmptyCorpus() : DataError("corpus has no documents or no tokens") {}
};
struct EmptyDocument : DataError {
  EmptyDocument() : DataError("document has no tokens") {}
};
struct RowCountMismatch : DataError {
  explicit RowCountMismatch(const std::string& w) : DataError(w) {}
};

// classify
struct DegenerateSplit : DataError {
  explicit DegenerateSplit(const std::string& w) : DataError(w) {}
};
struct SingleClassTraining : DataError {
  SingleClassTraining() : DataError("training labels contain a single class") {}
};
struct DimensionMismatch : DataError {
  explicit DimensionMismatch(const std::string& w) : DataError(w) {}
};
struct EmptySequence : DataError {
  EmptySequence() : DataError("empty token sequence") {}
};
struct FeatureModelMismatch : ConfigError {
  explicit FeatureModelMismatch(const std::string& w) : ConfigError(w) {}
};

// metrics
struct LengthMismatch : DataError {
  explicit LengthMismatch(const std::string& w) : DataError(w) {}
};
struct NonBinaryLabels : DataError {
  NonBinaryLabels() : DataError("labels must be 0 or 1") {}
};
struct SchemaMismatch : DataError {
  explicit SchemaMismatch(const std::string& w) : DataError(w) {}
};

// generate
struct CorpusTooShort : DataError {
  CorpusTooShort() : DataError("no document with at least two tokens") {}
};
struct UnknownStartToken : DataError {
  explicit UnknownStartToken(const std::string& tok)
      : DataError("start token not in model: " + tok) {}
};
struct EmptyBatch : DataError {
  EmptyBatch() : DataError("empty batch") {}
};
struct CorpusTooSmall : DataError {
  explicit CorpusTooSmall(const std::string& w) : DataError(w) {}
};
struct NonFiniteLoss : NumericError {
  explicit NonFiniteLoss(const std::string& w) : NumericError(w) {}
};

}  // namespace merit
