#include "stripsplit/layout.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace stripsplit {

namespace {

std::string cell_text(const std::array<int, 4>& cell) {
  return "(" + std::to_string(cell[0]) + ", " + std::to_string(cell[1]) +
         ", " + std::to_string(cell[2]) + ", " + std::to_string(cell[3]) + ")";
}

std::string axis_text(Axis ax) {
  switch (ax) {
    case Axis::Block: return "block";
    case Axis::A:     return "A";
    case Axis::B:     return "B";
    case Axis::C:     return "C";
  }
  return "?";
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

// Splits one CSV line on commas; no quoting support, which matches the
// format this library writes. A trailing \r from CRLF input is dropped.
std::vector<std::string> split_fields(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Shortest decimal that round-trips the double, via to_chars.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ParseError::ParseError(int line_, const std::string& what)
    : IngestError("line " + std::to_string(line_) + ": " + what),
      line(line_) {}

DuplicateCell::DuplicateCell(const std::array<int, 4>& cell_)
    : IngestError("duplicate cell at indices " + cell_text(cell_)),
      cell(cell_) {}

MissingCell::MissingCell(const std::array<int, 4>& cell_)
    : IngestError("missing cell at indices " + cell_text(cell_)),
      cell(cell_) {}

TooFewLevels::TooFewLevels(Axis axis_, int count_)
    : IngestError("axis " + axis_text(axis_) + " has " +
                  std::to_string(count_) + " level(s); at least 2 required"),
      axis(axis_),
      count(count_) {}

BalancedLayout::BalancedLayout(DesignDims dims,
                               std::array<std::vector<std::string>, 4> labels,
                               std::vector<double> values)
    : dims_(dims), labels_(std::move(labels)), values_(std::move(values)) {
  const std::array<int, 4> expect = {dims_.r, dims_.a, dims_.b, dims_.c};
  for (int ax = 0; ax < 4; ++ax) {
    if (static_cast<int>(labels_[ax].size()) != expect[ax]) {
      throw std::invalid_argument("label count of axis " +
                                  axis_text(static_cast<Axis>(ax)) +
                                  " does not match the dims");
    }
  }
  if (static_cast<int>(values_.size()) != dims_.cells()) {
    throw std::invalid_argument("value array length does not match the dims");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("responses must be finite");
    }
  }
}

BalancedLayout ingest_csv(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++line_no;
  const std::vector<std::string> header = split_fields(line);
  const std::vector<std::string> expected = {"block", "a", "b", "c", "y"};
  if (header.size() != 5) {
    throw ParseError(line_no, "header must be block,A,B,C,y");
  }
  for (int f = 0; f < 5; ++f) {
    if (lower(header[f]) != expected[f]) {
      throw ParseError(line_no, "header must be block,A,B,C,y (got \"" +
                                    header[f] + "\" in column " +
                                    std::to_string(f + 1) + ")");
    }
  }

  struct Row {
    std::array<int, 4> idx;
    double y;
  };
  std::array<std::vector<std::string>, 4> labels;
  std::vector<Row> rows;

  auto label_index = [&](int ax, const std::string& text) {
    auto& list = labels[ax];
    auto it = std::find(list.begin(), list.end(), text);
    if (it != list.end()) return static_cast<int>(it - list.begin());
    list.push_back(text);
    return static_cast<int>(list.size()) - 1;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 comma-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    Row row;
    for (int ax = 0; ax < 4; ++ax) {
      if (fields[ax].empty()) {
        throw ParseError(line_no, "empty label in column " +
                                      std::to_string(ax + 1));
      }
      row.idx[ax] = label_index(ax, fields[ax]);
    }
    const std::string& ytext = fields[4];
    auto res = std::from_chars(ytext.data(), ytext.data() + ytext.size(),
                               row.y);
    if (res.ec != std::errc() || res.ptr != ytext.data() + ytext.size()) {
      throw ParseError(line_no, "response is not a number: \"" + ytext + "\"");
    }
    if (!std::isfinite(row.y)) {
      throw ParseError(line_no, "response is not finite: \"" + ytext + "\"");
    }
    rows.push_back(row);
  }

  for (int ax = 0; ax < 4; ++ax) {
    if (labels[ax].size() < 2) {
      throw TooFewLevels(static_cast<Axis>(ax),
                         static_cast<int>(labels[ax].size()));
    }
  }

  const DesignDims dims(static_cast<int>(labels[0].size()),
                        static_cast<int>(labels[1].size()),
                        static_cast<int>(labels[2].size()),
                        static_cast<int>(labels[3].size()));
  std::vector<double> values(dims.cells(), 0.0);
  std::vector<char> seen(dims.cells(), 0);
  auto flat = [&](const std::array<int, 4>& idx) {
    return ((idx[0] * dims.a + idx[1]) * dims.b + idx[2]) * dims.c + idx[3];
  };
  for (const Row& row : rows) {
    const int pos = flat(row.idx);
    if (seen[pos]) throw DuplicateCell(row.idx);
    seen[pos] = 1;
    values[pos] = row.y;
  }
  for (int h = 0; h < dims.r; ++h)
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.b; ++j)
        for (int k = 0; k < dims.c; ++k)
          if (!seen[flat({h, i, j, k})]) throw MissingCell({h, i, j, k});

  return BalancedLayout(dims, std::move(labels), std::move(values));
}

BalancedLayout ingest_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);
  return ingest_csv(in);
}

void write_csv(const BalancedLayout& layout, std::ostream& out) {
  out << "block,A,B,C,y\n";
  const DesignDims& d = layout.dims();
  for (int h = 0; h < d.r; ++h)
    for (int i = 0; i < d.a; ++i)
      for (int j = 0; j < d.b; ++j)
        for (int k = 0; k < d.c; ++k) {
          out << layout.labels(Axis::Block)[h] << ','
              << layout.labels(Axis::A)[i] << ','
              << layout.labels(Axis::B)[j] << ','
              << layout.labels(Axis::C)[k] << ','
              << format_double(layout.at(h, i, j, k)) << '\n';
        }
}

std::string to_csv(const BalancedLayout& layout) {
  std::ostringstream out;
  write_csv(layout, out);
  return out.str();
}

double marginal_mean(const BalancedLayout& layout, AxisSet kept,
                     const std::array<int, 4>& at) {
  const DesignDims& d = layout.dims();
  const std::array<int, 4> sizes = {d.r, d.a, d.b, d.c};
  std::array<int, 4> lo{}, hi{};
  for (int ax = 0; ax < 4; ++ax) {
    if (kept.contains(static_cast<Axis>(ax))) {
      if (at[ax] < 0 || at[ax] >= sizes[ax]) {
        throw std::out_of_range("index " + std::to_string(at[ax]) +
                                " out of range for axis " +
                                axis_text(static_cast<Axis>(ax)));
      }
      lo[ax] = at[ax];
      hi[ax] = at[ax] + 1;
    } else {
      lo[ax] = 0;
      hi[ax] = sizes[ax];
    }
  }
  double total = 0.0;
  long count = 0;
  for (int h = lo[0]; h < hi[0]; ++h)
    for (int i = lo[1]; i < hi[1]; ++i)
      for (int j = lo[2]; j < hi[2]; ++j)
        for (int k = lo[3]; k < hi[3]; ++k) {
          total += layout.at(h, i, j, k);
          ++count;
        }
  return total / static_cast<double>(count);
}

}  // namespace stripsplit
