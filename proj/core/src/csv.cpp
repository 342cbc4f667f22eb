#include "rmstperm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmstperm/errors.hpp"

namespace rmstperm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_time(const std::string& field, long line_no) {
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw parse_error("row " + std::to_string(line_no) + ": invalid time '" +
                      field + "'");
  }
  if (pos != field.size() || !std::isfinite(value))
    throw parse_error("row " + std::to_string(line_no) + ": invalid time '" +
                      field + "'");
  if (value < 0.0)
    throw parse_error("row " + std::to_string(line_no) + ": negative time");
  return value;
}

}  // namespace

Dataset read_dataset(std::istream& in, const CsvOptions& options) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty input");
  if (!line.empty() && line.front() == '\xEF' && line.size() >= 3)
    line.erase(0, 3);  // UTF-8 BOM
  {
    const auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "time" || header[1] != "status" ||
        header[2] != "group")
      throw parse_error("header must be exactly 'time,status,group'");
  }

  double rounding = 0.0;
  if (options.round_decimals) {
    if (*options.round_decimals < 0 || *options.round_decimals > 12)
      throw invalid_input_error("round_decimals must lie in [0, 12]");
    rounding = std::pow(10.0, *options.round_decimals);
  }

  std::array<std::string, 2> labels;
  std::array<std::vector<Observation>, 2> groups;
  int n_labels = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw parse_error("row " + std::to_string(line_no) +
                        ": expected 3 fields, got " + std::to_string(fields.size()));

    double time = parse_time(fields[0], line_no);
    if (rounding > 0.0) time = std::round(time * rounding) / rounding;

    bool event;
    if (fields[1] == "1") event = true;
    else if (fields[1] == "0") event = false;
    else
      throw parse_error("row " + std::to_string(line_no) +
                        ": status must be 0 or 1, got '" + fields[1] + "'");

    const std::string& label = fields[2];
    if (label.empty())
      throw parse_error("row " + std::to_string(line_no) + ": empty group label");
    int idx = -1;
    for (int g = 0; g < n_labels; ++g)
      if (labels[g] == label) idx = g;
    if (idx < 0) {
      if (n_labels == 2)
        throw parse_error("row " + std::to_string(line_no) +
                          ": more than two group labels (third is '" + label + "')");
      idx = n_labels++;
      labels[idx] = label;
    }
    groups[idx].push_back({time, event, idx + 1});
  }
  if (n_labels < 2)
    throw parse_error("dataset must contain exactly two groups, found " +
                      std::to_string(n_labels));

  Dataset ds;
  ds.group_labels = labels;
  ds.group1 = Sample(std::move(groups[0]));
  ds.group2 = Sample(std::move(groups[1]));
  return ds;
}

Dataset read_dataset_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open dataset file: " + path);
  return read_dataset(in, options);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  out << "time,status,group\n";
  char buf[64];
  auto write_group = [&](const Sample& sample, const std::string& label) {
    for (const auto& o : sample.observations()) {
      std::snprintf(buf, sizeof(buf), "%.17g", o.time);
      out << buf << ',' << (o.event ? '1' : '0') << ',' << label << '\n';
    }
  };
  write_group(dataset.group1, dataset.group_labels[0]);
  write_group(dataset.group2, dataset.group_labels[1]);
}

}  // namespace rmstperm
