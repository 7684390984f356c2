#include "strata/dataio.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace strata {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  // a trailing newline does not add an empty record
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_double_field(const std::string& field, std::size_t line_no,
                          const std::string& column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (field.empty() || end != begin + field.size())
    throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                        ", column " + column +
                                        ": cannot parse '" + field + "'");
  return v;
}

std::int64_t parse_int_field(const std::string& field, std::size_t line_no,
                             const std::string& column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (field.empty() || end != begin + field.size())
    throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                        ", column " + column +
                                        ": cannot parse '" + field +
                                        "' as an integer");
  return v;
}

const std::vector<std::string> kSummaryBase = {
    "stratum_id", "N", "n", "mean_x", "mean_y", "sd_x", "sd_y", "rho"};
const std::vector<std::string> kSummaryOptional = {"cx", "cy", "beta2x",
                                                   "f_override"};

}  // namespace

StratifiedDesign parse_summary_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty())
    throw Error(Errc::MalformedHeader, "empty input");

  const auto header = split_line(lines[0]);
  if (header.size() < kSummaryBase.size())
    throw Error(Errc::MalformedHeader,
                "expected at least the " +
                    std::to_string(kSummaryBase.size()) + " base columns");
  for (std::size_t i = 0; i < kSummaryBase.size(); ++i)
    if (header[i] != kSummaryBase[i])
      throw Error(Errc::MalformedHeader, "column " + std::to_string(i + 1) +
                                             " must be '" + kSummaryBase[i] +
                                             "', got '" + header[i] + "'");
  // optional columns: any subsequence of cx,cy,beta2x,f_override
  std::vector<std::string> extras;
  std::size_t opt_cursor = 0;
  for (std::size_t i = kSummaryBase.size(); i < header.size(); ++i) {
    while (opt_cursor < kSummaryOptional.size() &&
           header[i] != kSummaryOptional[opt_cursor])
      ++opt_cursor;
    if (opt_cursor == kSummaryOptional.size())
      throw Error(Errc::MalformedHeader,
                  "unknown or out-of-order optional column '" + header[i] + "'");
    extras.push_back(header[i]);
    ++opt_cursor;
  }

  if (lines.size() == 1)
    throw Error(Errc::MalformedRow, "no strata");

  std::vector<StratumRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;  // 1-based, header is line 1
    const auto fields = split_line(lines[li]);
    if (fields.size() != header.size())
      throw Error(Errc::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    StratumRecord r;
    r.id = fields[0];
    if (r.id.empty())
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                          ", column stratum_id: empty");
    r.pop_count = parse_int_field(fields[1], line_no, "N");
    r.sample_count = parse_int_field(fields[2], line_no, "n");
    r.mean_x = parse_double_field(fields[3], line_no, "mean_x");
    r.mean_y = parse_double_field(fields[4], line_no, "mean_y");
    r.sd_x = parse_double_field(fields[5], line_no, "sd_x");
    r.sd_y = parse_double_field(fields[6], line_no, "sd_y");
    r.rho = parse_double_field(fields[7], line_no, "rho");
    for (std::size_t e = 0; e < extras.size(); ++e) {
      const std::string& field = fields[kSummaryBase.size() + e];
      if (field.empty()) continue;  // absent
      const double v = parse_double_field(field, line_no, extras[e]);
      if (extras[e] == "cx") r.cx = v;
      else if (extras[e] == "cy") r.cy = v;
      else if (extras[e] == "beta2x") r.beta2x = v;
      else r.f_override = v;
    }
    records.push_back(std::move(r));
  }
  return finalize_design(records);
}

std::string write_summary_csv(const StratifiedDesign& design) {
  bool has[4] = {false, false, false, false};
  for (const auto& s : design.strata) {
    has[0] |= s.cx.has_value();
    has[1] |= s.cy.has_value();
    has[2] |= s.beta2x.has_value();
    has[3] |= s.f_override.has_value();
  }
  std::string out;
  for (std::size_t i = 0; i < kSummaryBase.size(); ++i) {
    if (i) out += ',';
    out += kSummaryBase[i];
  }
  for (std::size_t i = 0; i < kSummaryOptional.size(); ++i)
    if (has[i]) out += ',' + kSummaryOptional[i];
  out += '\n';

  for (const auto& s : design.strata) {
    out += s.id;
    out += ',' + std::to_string(s.pop_count);
    out += ',' + std::to_string(s.sample_count);
    out += ',' + fmt17(s.mean_x);
    out += ',' + fmt17(s.mean_y);
    out += ',' + fmt17(s.sd_x);
    out += ',' + fmt17(s.sd_y);
    out += ',' + fmt17(s.rho);
    const std::optional<double> opts[4] = {s.cx, s.cy, s.beta2x, s.f_override};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!has[i]) continue;
      out += ',';
      if (opts[i]) out += fmt17(*opts[i]);
    }
    out += '\n';
  }
  return out;
}

MicroData parse_micro_csv(std::string_view text, bool census) {
  const auto lines = split_lines(text);
  if (lines.empty())
    throw Error(Errc::MalformedHeader, "empty input");
  const auto header = split_line(lines[0]);
  if (header.size() != 3 || header[0] != "stratum_id" || header[1] != "y" ||
      header[2] != "x")
    throw Error(Errc::MalformedHeader, "header must be 'stratum_id,y,x'");
  if (lines.size() == 1)
    throw Error(Errc::MalformedRow, "no units");

  std::vector<std::string> order;
  struct Bucket {
    std::vector<double> y, x;
  };
  std::vector<Bucket> buckets;
  auto bucket_of = [&](const std::string& id) -> Bucket& {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == id) return buckets[i];
    order.push_back(id);
    buckets.emplace_back();
    return buckets.back();
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = split_line(lines[li]);
    if (fields.size() != 3)
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                          ": expected 3 fields, got " +
                                          std::to_string(fields.size()));
    if (fields[0].empty())
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) +
                                          ", column stratum_id: empty");
    const double y = parse_double_field(fields[1], line_no, "y");
    const double x = parse_double_field(fields[2], line_no, "x");
    Bucket& b = bucket_of(fields[0]);
    b.y.push_back(y);
    b.x.push_back(x);
  }

  MicroData data;
  data.sample.strata.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (buckets[i].y.size() < 2)
      throw Error(Errc::SingletonStratum,
                  "stratum '" + order[i] +
                      "' has one unit; divisor-(n-1) moments undefined");
    data.sample.strata.push_back(
        make_sample_stratum(order[i], buckets[i].y, buckets[i].x));
  }
  if (census) {
    FinitePopulation pop;
    pop.strata.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      pop.strata.push_back(
          {order[i], std::move(buckets[i].y), std::move(buckets[i].x)});
    data.population = std::move(pop);
  }
  return data;
}

const char* f_convention_name(FConvention convention) noexcept {
  return convention == FConvention::computed ? "computed" : "tabulated";
}

std::vector<std::string> builtin_dataset_names() {
  return {"kadilar-cingi-1999"};
}

StratifiedDesign builtin_dataset(const std::string& name,
                                 FConvention convention) {
  if (name != "kadilar-cingi-1999") {
    std::string known;
    for (const auto& k : builtin_dataset_names())
      known += (known.empty() ? "" : ", ") + k;
    throw Error(Errc::UnknownDataset,
                "'" + name + "'; available: " + known);
  }
  struct Row {
    const char* id;
    std::int64_t N, n;
    double mean_x, mean_y, sd_x, sd_y, rho, cx, cy, beta2x, f_tab;
  };
  static const Row kRows[] = {
      {"1", 106, 9, 24375, 536, 49189, 6425, 0.82, 2.02, 4.18, 25.71, 0.102},
      {"2", 106, 17, 27421, 2212, 57461, 11552, 0.86, 2.10, 5.22, 34.57, 0.049},
      {"3", 94, 38, 72409, 9384, 160757, 29907, 0.90, 2.22, 3.19, 26.14, 0.016},
      {"4", 171, 67, 74365, 5588, 285603, 28643, 0.99, 3.84, 5.13, 97.60, 0.009},
      {"5", 204, 7, 26441, 967, 45403, 2390, 0.71, 1.72, 2.47, 27.47, 0.138},
      {"6", 173, 2, 9844, 404, 18794, 946, 0.89, 1.91, 2.34, 28.10, 0.006},
  };
  std::vector<StratumRecord> records;
  records.reserve(std::size(kRows));
  for (const Row& row : kRows) {
    StratumRecord r;
    r.id = row.id;
    r.pop_count = row.N;
    r.sample_count = row.n;
    r.mean_x = row.mean_x;
    r.mean_y = row.mean_y;
    r.sd_x = row.sd_x;
    r.sd_y = row.sd_y;
    r.rho = row.rho;
    r.cx = row.cx;
    r.cy = row.cy;
    r.beta2x = row.beta2x;
    if (convention == FConvention::tabulated) r.f_override = row.f_tab;
    records.push_back(std::move(r));
  }
  return finalize_design(records);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_to_json(const AnalysisReport& report) {
  ordered_json j;
  j["dataset"] = report.dataset;
  j["f_convention"] = report.f_convention;
  ordered_json estimators = ordered_json::array();
  for (const auto& e : report.estimators) {
    ordered_json entry;
    entry["id"] = estimator_name(e.id);
    entry["mse"] = e.mse;
    entry["pre"] = e.pre;
    estimators.push_back(std::move(entry));
  }
  j["estimators"] = std::move(estimators);
  if (report.lambda_opt) {
    j["lambda_opt"] = {{"lambda1", report.lambda_opt->lambda1},
                       {"lambda2", report.lambda_opt->lambda2}};
  } else {
    j["lambda_opt"] = nullptr;
  }
  if (report.a_opt)
    j["a_opt"] = *report.a_opt;
  else
    j["a_opt"] = nullptr;
  if (report.bias_tp_opt)
    j["bias_tp"] = *report.bias_tp_opt;
  else
    j["bias_tp"] = nullptr;
  if (report.mse_tp_min)
    j["mse_tp_min"] = *report.mse_tp_min;
  else
    j["mse_tp_min"] = nullptr;
  ordered_json unavailable = ordered_json::array();
  for (const auto& [id, reason] : report.unavailable)
    unavailable.push_back({{"id", estimator_name(id)}, {"reason", reason}});
  j["unavailable"] = std::move(unavailable);
  return j;
}

}  // namespace

std::string write_report(const AnalysisReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";

  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-6s %-11s %10s\n", "S.No.", "ESTIMATORS",
                "PRE'S");
  out += buf;
  int sno = 1;
  for (const auto& e : report.estimators) {
    std::snprintf(buf, sizeof(buf), "%-6d %-11s %10s\n", sno++,
                  estimator_name(e.id), fmt2(e.pre).c_str());
    out += buf;
  }
  for (const auto& [id, reason] : report.unavailable) {
    std::snprintf(buf, sizeof(buf), "%-6s %-11s %10s\n", "-", estimator_name(id),
                  "n/a");
    out += buf;
  }
  out += '\n';
  if (!report.dataset.empty()) out += "dataset: " + report.dataset + "\n";
  out += "f-convention: " + report.f_convention + "\n";
  if (report.lambda_opt) {
    out += "lambda1*: " + fmt17(report.lambda_opt->lambda1) + "\n";
    out += "lambda2*: " + fmt17(report.lambda_opt->lambda2) + "\n";
  }
  if (report.a_opt) {
    out += "a*:";
    for (double a : *report.a_opt) out += " " + fmt17(a);
    out += "\n";
  }
  if (report.bias_tp_opt) out += "bias(tp): " + fmt17(*report.bias_tp_opt) + "\n";
  if (report.mse_tp_min) out += "mse(tp) min: " + fmt17(*report.mse_tp_min) + "\n";
  for (const auto& [id, reason] : report.unavailable)
    out += std::string("unavailable ") + estimator_name(id) + ": " + reason + "\n";
  return out;
}

AnalysisReport report_from_json(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedRow, std::string("report JSON: ") + e.what());
  }
  AnalysisReport report;
  report.dataset = j.at("dataset").get<std::string>();
  report.f_convention = j.at("f_convention").get<std::string>();
  for (const auto& entry : j.at("estimators")) {
    const auto id = estimator_from_name(entry.at("id").get<std::string>());
    if (!id)
      throw Error(Errc::MalformedRow,
                  "report JSON: unknown estimator id '" +
                      entry.at("id").get<std::string>() + "'");
    report.estimators.push_back(
        {*id, entry.at("mse").get<double>(), entry.at("pre").get<double>()});
  }
  if (!j.at("lambda_opt").is_null())
    report.lambda_opt = LambdaPair{j["lambda_opt"].at("lambda1").get<double>(),
                                   j["lambda_opt"].at("lambda2").get<double>()};
  if (!j.at("a_opt").is_null())
    report.a_opt = j["a_opt"].get<std::vector<double>>();
  if (!j.at("bias_tp").is_null()) report.bias_tp_opt = j["bias_tp"].get<double>();
  if (!j.at("mse_tp_min").is_null())
    report.mse_tp_min = j["mse_tp_min"].get<double>();
  for (const auto& entry : j.at("unavailable")) {
    const auto id = estimator_from_name(entry.at("id").get<std::string>());
    if (!id)
      throw Error(Errc::MalformedRow,
                  "report JSON: unknown estimator id in unavailable list");
    report.unavailable.emplace_back(*id, entry.at("reason").get<std::string>());
  }
  return report;
}

std::string write_simulation_report(const SimulationReport& report) {
  std::string out = "simulation report\n";
  out += "replicates: " + std::to_string(report.requested_replicates) + "\n";
  out += "seed: " + std::to_string(report.seed) + "\n";
  out += "true mean: " + fmt17(report.true_mean) + "\n";
  if (report.lambda_opt)
    out += "lambda*: " + fmt17(report.lambda_opt->lambda1) + " " +
           fmt17(report.lambda_opt->lambda2) + "\n";
  if (report.a_opt) {
    out += "a*:";
    for (double a : *report.a_opt) out += " " + fmt17(a);
    out += "\n";
  }
  if (report.high_failure_rate)
    out += "warning: an estimator failed on more than 1% of replicates\n";
  out += "estimator ok failed empirical_mse mc_se empirical_bias theoretical_mse ratio\n";
  for (const auto& e : report.estimators) {
    out += estimator_name(e.id);
    out += " " + std::to_string(e.replicates);
    out += " " + std::to_string(e.failed);
    out += " " + fmt17(e.empirical_mse);
    out += " " + fmt17(e.mc_standard_error);
    out += " " + fmt17(e.empirical_bias);
    if (e.theoretical_mse) {
      out += " " + fmt17(*e.theoretical_mse);
      out += " " + fmt17(e.empirical_mse / *e.theoretical_mse);
    } else {
      out += " n/a n/a";
    }
    out += "\n";
  }
  for (const auto& [id, reason] : report.unavailable)
    out += std::string("unavailable ") + estimator_name(id) + ": " + reason + "\n";
  return out;
}

std::string write_enumeration_report(const EnumerationResult& result) {
  std::string out = "exact enumeration report\n";
  out += "samples: " + std::to_string(result.total_samples) + "\n";
  out += "true mean: " + fmt17(result.true_mean) + "\n";
  out += "estimator expectation variance mse bias failed\n";
  for (const auto& e : result.estimators) {
    out += estimator_name(e.id);
    out += " " + fmt17(e.expectation);
    out += " " + fmt17(e.variance);
    out += " " + fmt17(e.mse);
    out += " " + fmt17(e.bias);
    out += " " + std::to_string(e.failed_samples);
    out += "\n";
  }
  for (const auto& [id, reason] : result.unavailable)
    out += std::string("unavailable ") + estimator_name(id) + ": " + reason + "\n";
  return out;
}

}  // namespace strata
