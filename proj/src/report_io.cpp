#include "qstates/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "qstates/error.hpp"

namespace qstates {

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot rename to " + path.string() + ": " + ec.message());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_table(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += "\r\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

json plot_table(std::vector<std::string> columns, const std::vector<std::vector<double>>& rows) {
  return {{"kind", "table"}, {"columns", std::move(columns)}, {"rows", rows}};
}

json plot_histogram(const std::vector<double>& values, int bins) {
  return {{"kind", "histogram"}, {"values", values}, {"bins", bins}};
}

std::vector<std::pair<double, std::size_t>> histogram(const std::vector<double>& values, int bins) {
  if (values.empty() || bins < 1) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return {{lo, values.size()}};
  const double width = (hi - lo) / bins;
  std::vector<std::pair<double, std::size_t>> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) out[static_cast<std::size_t>(b)].first = lo + b * width;
  for (double v : values) {
    auto b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].second;
  }
  return out;
}

namespace {

std::string cell_text(const json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::vector<std::filesystem::path> emit_plotdata(const json& report, const std::filesystem::path& dir,
                                                 std::string_view stem) {
  std::vector<std::filesystem::path> written;
  if (!report.contains("plots")) return written;
  for (const auto& [name, plot] : report.at("plots").items()) {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    const std::string kind = plot.value("kind", "table");
    if (kind == "histogram") {
      columns = {"bin", "count"};
      for (const auto& [edge, count] : histogram(plot.at("values").get<std::vector<double>>(), plot.value("bins", 20))) {
        rows.push_back({format_number(edge), std::to_string(count)});
      }
    } else {
      columns = plot.at("columns").get<std::vector<std::string>>();
      for (const auto& r : plot.at("rows")) {
        std::vector<std::string> cells;
        for (const auto& v : r) cells.push_back(cell_text(v));
        rows.push_back(std::move(cells));
      }
    }
    const auto path = dir / (std::string(stem) + "_" + name + ".csv");
    write_atomic(path, csv_table(columns, rows));
    written.push_back(path);
  }
  return written;
}

}  // namespace qstates
