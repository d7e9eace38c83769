#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "tonesim/time.hpp"

namespace tonesim {

using TraceValue = std::variant<std::int64_t, std::string_view, bool>;
using TraceField = std::pair<std::string_view, TraceValue>;

/// Receives one record per simulation event of interest.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void emit(SimTime t, StaId sta, std::string_view ev,
                    std::initializer_list<TraceField> fields) = 0;
};

/// Writes one JSON object per line:
///   {"t":<us>,"sta":<id>,"ev":"<kind>",<fields...>}
/// Key order follows emission order, so output is byte-stable.
class JsonlTraceWriter final : public TraceSink {
 public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(out) {}

  void emit(SimTime t, StaId sta, std::string_view ev,
            std::initializer_list<TraceField> fields) override;

  std::uint64_t lines() const { return lines_; }

 private:
  std::ostream& out_;
  std::uint64_t lines_ = 0;
  std::string buf_;
};

}  // namespace tonesim
