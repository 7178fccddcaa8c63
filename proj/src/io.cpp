#include "levy/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levy/error.hpp"

namespace levy::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(Json header, std::vector<std::string> columns)
    : header_(std::move(header)), n_cols_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw Error(ErrorKind::invalid_argument, "CSV row has the wrong width");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return "# " + header_.dump() + "\n" + body_; }

namespace {

double parse_number(std::string_view s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::io_error, "malformed number '" + std::string(s) + "' in CSV");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

ParsedCsv parse_csv(std::string_view text) {
  ParsedCsv out;
  out.header = Json::object();
  std::size_t pos = 0;
  bool have_columns = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      try {
        out.header = Json::parse(line);
      } catch (const std::exception&) {
        throw Error(ErrorKind::io_error, "CSV header line is not JSON");
      }
      continue;
    }
    const auto fields = split(line);
    if (!have_columns) {
      have_columns = true;
      const bool numeric = !fields.empty() && !fields[0].empty() &&
                           (std::isdigit(static_cast<unsigned char>(fields[0][0])) || fields[0][0] == '-' ||
                            fields[0][0] == '.');
      if (!numeric) {
        for (auto f : fields) out.columns.emplace_back(f);
        continue;
      }
    }
    std::vector<double> row;
    for (auto f : fields) row.push_back(parse_number(f));
    if (!out.columns.empty() && row.size() != out.columns.size()) {
      throw Error(ErrorKind::io_error, "CSV row width differs from the column line");
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

void atomic_write(const std::filesystem::path& file, std::string_view content) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::io_error, "cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::io_error, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io_error, "cannot rename into " + file.string());
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorKind::io_error, "cannot open " + file.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace levy::io
