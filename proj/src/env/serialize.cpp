#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "toetd/error.hpp"
#include "toetd/mrp.hpp"
#include "toetd/number_format.hpp"

namespace toetd {

namespace {

constexpr const char* kFormatTag = "toetd-mrp-1";

void write_values(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(values[i]);
  }
}

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << '[' << name << "]\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    write_values(out, {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())});
    out << '\n';
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string token;
  while (in >> token) values.push_back(parse_double(token));
  return values;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, std::size_t expected_rows, const std::string& name) {
  if (rows.size() != expected_rows) {
    throw InvalidInput("block [" + name + "] has " + std::to_string(rows.size()) + " rows, expected " +
                       std::to_string(expected_rows));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(static_cast<Eigen::Index>(expected_rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InvalidInput("ragged rows in block [" + name + "]");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

void write_spec(std::ostream& out, const MrpSpec& spec) {
  out << "format = " << kFormatTag << '\n';
  out << "num_states = " << spec.num_states() << '\n';
  out << "num_features = " << spec.num_features() << '\n';
  out << "interest = " << to_string(spec.interest.kind);
  if (spec.interest.kind == InterestKind::constant) out << ' ' << format_double(spec.interest.value);
  out << '\n';
  if (spec.interest.kind == InterestKind::per_state) {
    out << "interest_table = ";
    write_values(out, spec.interest.table);
    out << '\n';
  }
  out << "start_distribution = ";
  write_values(out, spec.start_distribution);
  out << "\ndiscount = ";
  write_values(out, spec.discount);
  out << '\n';
  if (!spec.initial_weights.empty()) {
    out << "initial_weights = ";
    write_values(out, spec.initial_weights);
    out << '\n';
  }
  write_matrix(out, "behavior", spec.behavior);
  write_matrix(out, "target", spec.target);
  write_matrix(out, "cumulant", spec.cumulant);
  write_matrix(out, "features", spec.features);
}

MrpSpec read_spec(std::istream& in) {
  std::map<std::string, std::string> keys;
  std::map<std::string, std::vector<std::vector<double>>> blocks;
  std::string block;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidInput("malformed block header '" + line + "'");
      block = trim(line.substr(1, line.size() - 2));
      if (blocks.contains(block)) throw InvalidInput("duplicate block [" + block + "]");
      blocks[block];
      continue;
    }
    if (const auto eq = line.find('='); eq != std::string::npos) {
      keys[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      block.clear();
      continue;
    }
    if (block.empty()) throw InvalidInput("matrix row outside a block: '" + line + "'");
    blocks[block].push_back(parse_values(line));
  }

  auto key = [&keys](const std::string& name) -> const std::string& {
    const auto it = keys.find(name);
    if (it == keys.end()) throw InvalidInput("missing key '" + name + "'");
    return it->second;
  };
  auto matrix = [&blocks](const std::string& name, std::size_t rows) {
    const auto it = blocks.find(name);
    if (it == blocks.end()) throw InvalidInput("missing block [" + name + "]");
    return to_matrix(it->second, rows, name);
  };

  if (key("format") != kFormatTag) throw InvalidInput("unsupported format '" + key("format") + "'");
  const auto num_states = static_cast<std::size_t>(std::stoul(key("num_states")));
  const auto num_features = static_cast<std::size_t>(std::stoul(key("num_features")));

  MrpSpec spec;
  std::istringstream interest(key("interest"));
  std::string kind;
  interest >> kind;
  spec.interest.kind = parse_interest_kind(kind);
  if (spec.interest.kind == InterestKind::constant) {
    std::string value;
    if (interest >> value) spec.interest.value = parse_double(value);
  } else if (spec.interest.kind == InterestKind::per_state) {
    spec.interest.table = parse_values(key("interest_table"));
  }
  spec.start_distribution = parse_values(key("start_distribution"));
  spec.discount = parse_values(key("discount"));
  if (spec.discount.size() != num_states) throw InvalidInput("discount length does not match num_states");
  if (keys.contains("initial_weights")) spec.initial_weights = parse_values(keys["initial_weights"]);
  spec.behavior = matrix("behavior", num_states);
  spec.target = matrix("target", num_states);
  spec.cumulant = matrix("cumulant", num_states);
  spec.features = matrix("features", num_states);
  if (spec.num_features() != num_features) throw InvalidInput("feature block width does not match num_features");
  validate(spec);
  return spec;
}

MrpSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open MRP file '" + path + "'");
  return read_spec(in);
}

}  // namespace toetd
