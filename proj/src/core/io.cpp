#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mismatch {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Trim to the shortest form that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), MM_ERR_IO, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  require(in.good() || in.eof(), MM_ERR_IO, "cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), MM_ERR_IO, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  require(out.good(), MM_ERR_IO, "cannot write " + path);
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), MM_ERR_PARSE, what + ": invalid JSON");
  return j;
}

std::vector<double> read_matrix(const json& j, const char* key, int rows,
                                int cols, const std::string& what) {
  require(j.contains(key), MM_ERR_PARSE,
          what + ": missing field \"" + key + "\"");
  const json& m = j.at(key);
  require(m.is_array(), MM_ERR_PARSE,
          what + ": field \"" + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  const auto push_number = [&](const json& v) {
    require(v.is_number(), MM_ERR_PARSE,
            what + ": field \"" + key + "\" has a non-numeric entry");
    out.push_back(v.get<double>());
  };
  if (!m.empty() && m.front().is_array()) {
    require(static_cast<int>(m.size()) == rows, MM_ERR_PARSE,
            what + ": field \"" + key + "\" must have " +
                std::to_string(rows) + " rows");
    for (const json& row : m) {
      require(row.is_array() && static_cast<int>(row.size()) == cols,
              MM_ERR_PARSE,
              what + ": field \"" + key + "\" must have " +
                  std::to_string(cols) + " columns per row");
      for (const json& v : row) push_number(v);
    }
  } else {
    require(static_cast<int>(m.size()) == rows * cols, MM_ERR_PARSE,
            what + ": field \"" + key + "\" must have " +
                std::to_string(rows * cols) + " entries");
    for (const json& v : m) push_number(v);
  }
  return out;
}

int read_size(const json& j, const char* key, const std::string& what) {
  require(j.contains(key), MM_ERR_PARSE,
          what + ": missing field \"" + key + "\"");
  const json& v = j.at(key);
  require(v.is_number_integer() && v.get<std::int64_t>() >= 1 &&
              v.get<std::int64_t>() <= 4096,
          MM_ERR_PARSE,
          what + ": field \"" + key + "\" must be an integer in [1, 4096]");
  return static_cast<int>(v.get<std::int64_t>());
}

}  // namespace

ProblemPair parse_problem(const std::string& text) {
  const std::string what = "problem";
  json j = parse_json(text, what);
  require(j.is_object(), MM_ERR_PARSE, what + ": top level must be an object");
  const int in = read_size(j, "input_size", what);
  const int out = read_size(j, "output_size", what);
  std::vector<double> w = read_matrix(j, "W", in, out, what);
  std::vector<double> q = read_matrix(j, "q", in, out, what);
  std::string name;
  if (j.contains("name")) {
    require(j.at("name").is_string(), MM_ERR_PARSE,
            what + ": field \"name\" must be a string");
    name = j.at("name").get<std::string>();
  }
  const ChannelSpec channel = ChannelSpec::validated(in, out, std::move(w));
  return validate_pair(channel, q, std::move(name));
}

ProblemPair load_problem(const std::string& path) {
  return parse_problem(read_file(path));
}

std::string codebook_to_json(const Codebook& cb) {
  json j;
  j["n"] = cb.n;
  j["M"] = cb.size;
  j["words"] = cb.words;
  j["seed"] = cb.seed;
  j["kind"] =
      cb.kind == CodebookKind::Iid ? "iid" : "constant_composition";
  return j.dump(2) + "\n";
}

Codebook codebook_from_json(const std::string& text) {
  const std::string what = "codebook";
  json j = parse_json(text, what);
  require(j.is_object(), MM_ERR_PARSE, what + ": top level must be an object");
  Codebook cb;
  cb.n = read_size(j, "n", what);
  require(j.contains("M") && j.at("M").is_number_integer() &&
              j.at("M").get<std::int64_t>() >= 1,
          MM_ERR_PARSE, what + ": field \"M\" must be a positive integer");
  cb.size = j.at("M").get<std::uint64_t>();
  require(j.contains("seed") && j.at("seed").is_number_integer(), MM_ERR_PARSE,
          what + ": field \"seed\" must be an integer");
  cb.seed = j.at("seed").get<std::uint64_t>();
  require(j.contains("kind") && j.at("kind").is_string(), MM_ERR_PARSE,
          what + ": field \"kind\" must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "iid")
    cb.kind = CodebookKind::Iid;
  else if (kind == "constant_composition")
    cb.kind = CodebookKind::ConstantComposition;
  else
    raise(MM_ERR_PARSE, what + ": unknown kind \"" + kind + "\"");
  require(j.contains("words") && j.at("words").is_array(), MM_ERR_PARSE,
          what + ": field \"words\" must be an array");
  const json& words = j.at("words");
  require(words.size() == cb.size * static_cast<std::uint64_t>(cb.n),
          MM_ERR_PARSE, what + ": field \"words\" must have M * n entries");
  cb.words.reserve(words.size());
  for (const json& v : words) {
    require(v.is_number_integer() && v.get<std::int64_t>() >= 0, MM_ERR_PARSE,
            what + ": codeword symbols must be nonnegative integers");
    cb.words.push_back(static_cast<int>(v.get<std::int64_t>()));
  }
  return cb;
}

void save_codebook(const Codebook& cb, const std::string& path) {
  write_file(path, codebook_to_json(cb));
}

Codebook load_codebook(const std::string& path) {
  return codebook_from_json(read_file(path));
}

std::string spectrum_to_csv(const SpectrumPmf& pmf) {
  char buf[64];
  std::string out = "value,prob\n";
  for (const Atom& a : pmf.atoms) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.value, a.prob);
    out += buf;
  }
  return out;
}

std::string rate_result_to_json(const RateResult& r) {
  json j;
  j["value_nats"] = r.value;
  j["k"] = r.k;
  j["s"] = r.s;
  j["a"] = r.a;
  j["p"] = r.p.p;
  switch (r.status) {
    case RateStatus::Exact: j["status"] = "exact"; break;
    case RateStatus::Converged: j["status"] = "converged"; break;
    case RateStatus::BudgetHit: j["status"] = "budget_hit"; break;
  }
  return j.dump(2) + "\n";
}

std::string sandwich_to_csv(const std::vector<SandwichRow>& rows) {
  std::string out =
      "n,M,gamma,s,seed,pe_exact,pe_mc,stderr,feinstein,rcu,verdu_han,"
      "verdict_a,verdict_b\n";
  for (const SandwichRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.M);
    out += ',';
    out += format_double(r.gamma);
    out += ',';
    out += format_double(r.s);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_double(r.pe_exact);
    out += ',';
    out += format_double(r.pe_mc);
    out += ',';
    out += format_double(r.std_err);
    out += ',';
    out += format_double(r.feinstein);
    out += ',';
    out += format_double(r.rcu);
    out += ',';
    out += format_double(r.verdu_han);
    out += ',';
    out += r.verdict_a ? '1' : '0';
    out += ',';
    out += r.verdict_b ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace mismatch
