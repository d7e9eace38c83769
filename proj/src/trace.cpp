#include "tonesim/trace.hpp"

#include <nlohmann/json.hpp>

namespace tonesim {

namespace {

void append_string(std::string& buf, std::string_view s) {
  // Reuse the library's escaping rules.
  buf += nlohmann::json(std::string(s)).dump();
}

}  // namespace

void JsonlTraceWriter::emit(SimTime t, StaId sta, std::string_view ev,
                            std::initializer_list<TraceField> fields) {
  buf_.clear();
  buf_ += "{\"t\":";
  buf_ += std::to_string(t.us);
  buf_ += ",\"sta\":";
  buf_ += std::to_string(sta);
  buf_ += ",\"ev\":";
  append_string(buf_, ev);
  for (const auto& [key, value] : fields) {
    buf_ += ',';
    append_string(buf_, key);
    buf_ += ':';
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      buf_ += std::to_string(*i);
    } else if (const auto* s = std::get_if<std::string_view>(&value)) {
      append_string(buf_, *s);
    } else {
      buf_ += std::get<bool>(value) ? "true" : "false";
    }
  }
  buf_ += "}\n";
  out_ << buf_;
  ++lines_;
}

}  // namespace tonesim
