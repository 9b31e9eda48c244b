// CSV file formats of the command-line tool: feature/score tables with a
// single `# schema=...` header line, and plain +1/-1 label columns.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  out << content;
}

inline std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

struct TableHeader {
  bool present = false;
  std::string schema;       // "features" or "scores"
  std::string orientation;  // "novelty", "target" or ""
  std::vector<std::string> columns;
};

struct Table {
  TableHeader header;
  std::vector<double> values;  // row-major
  int rows = 0;
  int cols = 0;
};

// Header line: `# schema=scores, orientation=novelty, columns=a,b,c`.
// The columns key, when given, is last and consumes the rest of the line.
inline TableHeader parse_header(const std::string& line,
                                const std::string& path) {
  TableHeader header;
  header.present = true;
  std::string body = trim(line.substr(1));
  while (!body.empty()) {
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ":1: malformed header near '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    std::string rest = body.substr(eq + 1);
    std::string value;
    if (key == "columns") {
      value = trim(rest);
      body.clear();
    } else {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) {
        value = trim(rest);
        body.clear();
      } else {
        value = trim(rest.substr(0, comma));
        body = trim(rest.substr(comma + 1));
      }
    }
    if (key == "schema") {
      header.schema = value;
    } else if (key == "orientation") {
      header.orientation = value;
    } else if (key == "columns") {
      for (const auto& name : split(value, ',')) {
        header.columns.push_back(trim(name));
      }
    }
    // Unknown keys are ignored.
  }
  return header;
}

inline double parse_number(const std::string& token, const std::string& path,
                           int line_number) {
  const std::string text = trim(token);
  if (text.empty()) {
    throw InputError(path + ":" + std::to_string(line_number) +
                     ": empty numeric cell");
  }
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw InputError(path + ":" + std::to_string(line_number) +
                     ": bad numeric value '" + text + "'");
  }
  return value;
}

// Feature/score table. A missing header line is accepted and treated as a
// plain features table.
inline Table read_table(const std::string& path) {
  std::istringstream in(read_file(path));
  Table table;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = trim(line);
    if (text.empty()) {
      continue;
    }
    if (text[0] == '#') {
      if (!header_seen && table.rows == 0) {
        table.header = parse_header(text, path);
        header_seen = true;
        continue;
      }
      continue;  // later comment lines are ignored
    }
    const auto cells = split(text, ',');
    if (table.cols == 0) {
      table.cols = static_cast<int>(cells.size());
    } else if (static_cast<int>(cells.size()) != table.cols) {
      throw InputError(path + ":" + std::to_string(line_number) +
                       ": expected " + std::to_string(table.cols) +
                       " columns, got " + std::to_string(cells.size()));
    }
    for (const auto& cell : cells) {
      table.values.push_back(parse_number(cell, path, line_number));
    }
    ++table.rows;
  }
  if (table.rows == 0) {
    throw InputError(path + ": no data rows");
  }
  if (!table.header.present) {
    table.header.schema = "features";
  }
  if (table.header.schema.empty()) {
    table.header.schema = "features";
  }
  if (!table.header.columns.empty() &&
      static_cast<int>(table.header.columns.size()) != table.cols) {
    throw InputError(path + ": header names " +
                     std::to_string(table.header.columns.size()) +
                     " columns but rows have " + std::to_string(table.cols));
  }
  return table;
}

// Single +1/-1 column; a `# schema=labels` header is optional.
inline std::vector<int> read_labels(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<int> labels;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') {
      continue;
    }
    if (text == "1" || text == "+1") {
      labels.push_back(1);
    } else if (text == "-1") {
      labels.push_back(-1);
    } else {
      throw InputError(path + ":" + std::to_string(line_number) +
                       ": bad label '" + text + "' (expected +1 or -1)");
    }
  }
  if (labels.empty()) {
    throw InputError(path + ": no data rows");
  }
  return labels;
}

inline std::string format_cell(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::string scores_to_csv(const std::vector<double>& values, int rows,
                                 int cols,
                                 const std::vector<std::string>& columns,
                                 const std::string& orientation) {
  std::string out = "# schema=scores, orientation=" + orientation + ", columns=";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j > 0) out += ',';
      out += format_cell(values[static_cast<std::size_t>(i) *
                                    static_cast<std::size_t>(cols) +
                                static_cast<std::size_t>(j)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace cli
