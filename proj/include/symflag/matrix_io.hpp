#pragma once

#include "symflag/linalg.hpp"

#include <json.hpp>

#include <string>

namespace symflag {

class format_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// {"rows": r, "cols": c, "backend": "exact"|"float", "entries": [row-major strings]}
template <class T>
nlohmann::json matrix_to_json(const Matrix<T>& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& x : m.data()) entries.push_back(scalar_traits<T>::to_string(x));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"backend", scalar_traits<T>::name}, {"entries", entries}};
}

/// Reads either backend; exact entries are rounded when T is double and float
/// entries are converted exactly (as dyadic rationals) when T is Exact.
template <class T>
Matrix<T> matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto backend = j.at("backend").get<std::string>();
    const auto& entries = j.at("entries");
    if (rows == 0 || cols == 0) throw format_error("matrix must have positive dimensions");
    if (!entries.is_array() || entries.size() != rows * cols)
      throw format_error("entry count does not match rows*cols");
    if (backend != "exact" && backend != "float") throw format_error("unknown backend '" + backend + "'");
    std::vector<T> data;
    data.reserve(entries.size());
    for (const auto& e : entries) {
      const auto s = e.get<std::string>();
      if (backend == "exact") {
        Exact x = Exact::parse(s);
        if constexpr (is_exact_v<T>) data.push_back(std::move(x));
        else data.push_back(x.to_double());
      } else {
        const double x = scalar_traits<double>::parse(s);
        if constexpr (is_exact_v<T>) data.push_back(Exact::from_double(x));
        else data.push_back(x);
      }
    }
    return Matrix<T>(rows, cols, std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("malformed matrix document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw format_error(std::string("malformed matrix entry: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

template <class T>
Matrix<T> read_matrix_file(const std::string& path) {
  return matrix_from_json<T>(read_json_file(path));
}

} // namespace symflag
