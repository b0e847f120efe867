#include <algorithm>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "padicq/error.hpp"
#include "padicq/grid.hpp"

namespace padicq {

namespace {

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(s);
  while (std::getline(is, field, sep)) out.push_back(trim(field));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Error bad_line(std::size_t line, const std::string& what) {
  return Error(ErrorKind::invalid_input, "line " + std::to_string(line) + ": " + what);
}

long parse_long(const std::string& s, std::size_t line, const char* field) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw bad_line(line, std::string("field '") + field + "' is not an integer: '" + s + "'");
  }
  if (used != s.size()) throw bad_line(line, std::string("field '") + field + "' is not an integer: '" + s + "'");
  return v;
}

double parse_double(const std::string& s, std::size_t line, const char* field) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw bad_line(line, std::string("field '") + field + "' is not a number: '" + s + "'");
  }
  if (used != s.size()) throw bad_line(line, std::string("field '") + field + "' is not a number: '" + s + "'");
  return v;
}

}  // namespace

void write_state(std::ostream& os, const StateVector& phi) {
  const auto& g = phi.grid;
  nlohmann::ordered_json header;
  header["p"] = g.p();
  header["N"] = g.support();
  header["M"] = g.resolution();
  header["d"] = g.dim();
  header["label"] = phi.label;
  header["h"] = phi.h.value(g.p());
  header["h_exp"] = phi.h.exponent;
  os << header.dump() << '\n' << "cell_digits,re,im\n";
  const auto old_precision = os.precision(17);
  std::vector<std::string> axis_text(g.cells_per_axis());
  for (std::size_t i = 0; i < axis_text.size(); ++i) {
    std::ostringstream t;
    const auto digits = g.axis_digits(i);
    for (std::size_t k = 0; k < digits.size(); ++k) t << (k ? " " : "") << digits[k];
    axis_text[i] = t.str();
  }
  for (std::size_t flat = 0; flat < g.total_cells(); ++flat) {
    const auto idx = g.axis_indices(flat);
    for (std::size_t a = 0; a < idx.size(); ++a) os << (a ? "|" : "") << axis_text[idx[a]];
    os << ',' << phi.coeffs[flat].real() << ',' << phi.coeffs[flat].imag() << '\n';
  }
  os.precision(old_precision);
}

StateVector read_state(std::istream& is, std::size_t cell_limit) {
  std::string line;
  if (!std::getline(is, line)) throw bad_line(1, "missing JSON header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw bad_line(1, std::string("invalid JSON header: ") + e.what());
  }
  for (const char* key : {"p", "N", "M", "d"}) {
    if (!header.contains(key) || !header[key].is_number_integer()) {
      throw bad_line(1, std::string("header key '") + key + "' missing or not an integer");
    }
  }
  const BaseConfig cfg(header["p"].get<std::uint32_t>(), header["N"].get<int>() + header["M"].get<int>());
  const auto grid = GridSpec::make(cfg, header["N"].get<int>(), header["M"].get<int>(), header["d"].get<int>(), cell_limit);
  PlanckConstant h{header.value("h_exp", 0)};
  const std::string label = header.value("label", std::string{});

  if (!std::getline(is, line) || trim(line) != "cell_digits,re,im") {
    throw bad_line(2, "expected CSV header 'cell_digits,re,im'");
  }
  std::vector<cplx> coeffs(grid.total_cells());
  std::vector<bool> seen(grid.total_cells(), false);
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw bad_line(lineno, "expected 3 fields, got " + std::to_string(fields.size()));
    const auto axes = split(fields[0], '|');
    if (axes.size() != static_cast<std::size_t>(grid.dim())) throw bad_line(lineno, "wrong number of axes in cell_digits");
    std::vector<std::size_t> idx;
    for (const auto& axis : axes) {
      std::istringstream ds(axis);
      std::size_t index = 0;
      int count = 0;
      for (long d; ds >> d; ++count) {
        if (d < 0 || d >= static_cast<long>(grid.p())) throw bad_line(lineno, "digit out of range");
        index = index * grid.p() + static_cast<std::size_t>(d);
      }
      if (!ds.eof() || count != grid.depth()) throw bad_line(lineno, "cell_digits must list N+M digits per axis");
      idx.push_back(index);
    }
    const std::size_t flat = grid.flat_index(idx);
    if (seen[flat]) throw bad_line(lineno, "duplicate cell");
    seen[flat] = true;
    coeffs[flat] = {parse_double(fields[1], lineno, "re"), parse_double(fields[2], lineno, "im")};
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorKind::invalid_input, "state file does not list every cell");
  }
  return StateVector(grid, std::move(coeffs), label, h);
}

std::vector<SpikeRecord> read_spike_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw bad_line(1, "empty spike file");
  const auto head = split(line, ',');
  if (head != std::vector<std::string>{"neuron_index", "window_index", "count"}) {
    throw bad_line(1, "expected header 'neuron_index,window_index,count'");
  }
  std::vector<SpikeRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw bad_line(lineno, "expected 3 fields, got " + std::to_string(f.size()));
    SpikeRecord r;
    r.neuron = static_cast<int>(parse_long(f[0], lineno, "neuron_index"));
    r.window = static_cast<int>(parse_long(f[1], lineno, "window_index"));
    r.count = static_cast<int>(parse_long(f[2], lineno, "count"));
    if (r.neuron < 0 || r.window < 0 || r.count < 0) throw bad_line(lineno, "negative value");
    out.push_back(r);
  }
  return out;
}

std::vector<SpikeTrain> spike_trains(std::span<const SpikeRecord> records, double window_ms) {
  int neurons = 0;
  std::map<int, std::map<int, int>> by_window;
  for (const auto& r : records) {
    neurons = std::max(neurons, r.neuron + 1);
    auto [it, inserted] = by_window[r.window].emplace(r.neuron, r.count);
    if (!inserted) {
      throw Error(ErrorKind::invalid_input, "duplicate record for neuron " + std::to_string(r.neuron) + " in window " +
                                                std::to_string(r.window));
    }
  }
  std::vector<SpikeTrain> out;
  for (const auto& [window, counts] : by_window) {
    SpikeTrain t{std::vector<int>(static_cast<std::size_t>(neurons), 0), window_ms};
    for (const auto& [neuron, count] : counts) t.counts[static_cast<std::size_t>(neuron)] = count;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace padicq
