#include "symflag/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace symflag {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw format_error("write to '" + path + "' failed");
}

} // namespace symflag
