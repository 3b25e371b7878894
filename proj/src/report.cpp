#include "treeprob/report.hpp"

#include <sstream>
#include <stdexcept>

namespace treeprob {

namespace {

std::string join_p(const std::vector<int>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

}  // namespace

Json rational_to_json(const Rational& q) {
  Json j;
  j["num"] = q.get_num().get_str();
  j["den"] = q.get_den().get_str();
  return j;
}

Rational rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_string() ||
      !j["den"].is_string()) {
    throw std::invalid_argument("rational must be {\"num\": string, \"den\": string}");
  }
  BigCount num;
  BigCount den;
  if (num.set_str(j["num"].get<std::string>(), 10) != 0 ||
      den.set_str(j["den"].get<std::string>(), 10) != 0) {
    throw std::invalid_argument("rational fields must be decimal integers");
  }
  return make_rational(num, den);
}

Json report_to_json(const GridReport& report) {
  Json out;
  out["suite"] = report.suite;
  out["kind"] = report.kind;
  Json grid = Json::object();
  for (const auto& [key, value] : report.grid) grid[key] = value;
  out["grid"] = grid;
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json cell;
    cell["zeta"] = c.zeta;
    cell["check"] = c.check;
    cell["k"] = c.k;
    cell["r"] = c.r;
    cell["p"] = c.p;
    cell["lhs"] = rational_to_json(c.lhs);
    cell["rhs"] = rational_to_json(c.rhs);
    cell["status"] = std::string(status_name(c.status));
    cells.push_back(std::move(cell));
  }
  out["cells"] = std::move(cells);
  const GridSummary s = report.summary();
  out["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}};
  return out;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string report_to_csv(const GridReport& report) {
  std::ostringstream out;
  out << "suite,zeta,check,k,r,p,lhs,rhs,status\n";
  for (const auto& c : report.cells) {
    out << csv_field(report.suite) << ',' << csv_field(c.zeta) << ',' << csv_field(c.check) << ','
        << c.k << ',' << c.r << ',' << csv_field(join_p(c.p)) << ',' << to_string(c.lhs) << ','
        << to_string(c.rhs) << ',' << status_name(c.status) << '\n';
  }
  return out.str();
}

std::string report_to_text(const GridReport& report) {
  std::ostringstream out;
  out << "suite " << report.suite << " (" << report.kind << ")\n";
  const bool evidence = report.kind == "evidence";
  for (const auto& c : report.cells) {
    const char* tag = status_name(c.status).data();
    if (evidence && c.status == CellStatus::fail) tag = "COUNTEREXAMPLE";
    out << tag << "  zeta=" << c.zeta << " k=" << c.k << " r=" << c.r << " p=(" << join_p(c.p)
        << ")  " << c.check;
    if (c.status != CellStatus::skipped_infeasible) {
      out << "  lhs=" << to_string(c.lhs) << " rhs=" << to_string(c.rhs);
    }
    out << '\n';
  }
  const GridSummary s = report.summary();
  out << "summary: pass=" << s.pass << " fail=" << s.fail << " skipped=" << s.skipped << '\n';
  return out.str();
}

}  // namespace treeprob
