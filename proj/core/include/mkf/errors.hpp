#pragma once

#include <stdexcept>
#include <string>

namespace mkf {

// A data row with (near-)zero norm cannot be mapped to the unit sphere.
struct ZeroVector : std::runtime_error {
  explicit ZeroVector(long row_index)
      : std::runtime_error("zero vector at row " + std::to_string(row_index)),
        row(row_index) {}
  long row;
};

// Numerical rank below the requested dimension (smallest singular value
// at or under the shared 1e-10 tolerance).
struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDim : std::runtime_error {
  explicit InvalidDim(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParams : std::runtime_error {
  explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what)
      : std::runtime_error(what) {}
};

// Farthest insertion could not reach local rank d before exhausting the data.
struct InitFailure : std::runtime_error {
  explicit InitFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NoInliers : std::runtime_error {
  NoInliers() : std::runtime_error("no inliers in ground truth") {}
};

struct EmptyTrials : std::runtime_error {
  EmptyTrials() : std::runtime_error("empty trial list") {}
};

struct ParseError : std::runtime_error {
  ParseError(long line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  long line;
};

struct DimMismatch : std::runtime_error {
  DimMismatch(long line_number, long got, long expected)
      : std::runtime_error("line " + std::to_string(line_number) + ": got " +
                           std::to_string(got) + " values, expected " +
                           std::to_string(expected)),
        line(line_number) {}
  long line;
};

}  // namespace mkf
