#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hetgraph {

using VertexId = std::uint32_t;
using PropValue = std::uint32_t;

constexpr VertexId kInvalidVertex = 0xFFFFFFFFu;

/// One COO edge record. Weight defaults to 1 for unweighted inputs.
struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  std::uint32_t weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::uint64_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

// Internal invariant check, active in all build types. Simulator state
// machines rely on these to catch modelling bugs rather than UB.
#define HG_CHECK(cond, msg)                                   \
  do {                                                        \
    if (!(cond)) throw ::hetgraph::Error(std::string(msg));   \
  } while (0)

}  // namespace hetgraph
