#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trb/problems.hpp"

namespace trb {

namespace {

constexpr const char* kMagic = "trb-instance";
constexpr int kVersion = 1;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_block(std::ostream& out, const std::string& name, const Matrix& M) {
  out << "block " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) out << ' ';
      out << fmt17(M(r, c));
    }
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // next non-empty, non-comment line split into fields; false at EOF
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      fields.clear();
      for (std::string f; ss >> f;) fields.push_back(f);
      if (!fields.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("instance parse error at line " + std::to_string(line_no_) + ": " + msg);
  }

  double number(const std::string& s, const std::string& field) const {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("field '" + field + "': bad number '" + s + "'");
    return v;
  }

  long integer(const std::string& s, const std::string& field) const {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail("field '" + field + "': bad integer '" + s + "'");
    }
    return v;
  }

  std::uint64_t unsigned64(const std::string& s, const std::string& field) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail("field '" + field + "': bad unsigned integer '" + s + "'");
    }
    return v;
  }

  Matrix block(long rows, long cols, const std::string& name) {
    if (rows < 0 || cols < 0) fail("block '" + name + "': negative shape");
    Matrix M(rows, cols);
    std::vector<std::string> f;
    for (long r = 0; r < rows; ++r) {
      if (!next(f)) fail("block '" + name + "': unexpected end of input");
      if (static_cast<long>(f.size()) != cols) {
        fail("block '" + name + "' row " + std::to_string(r) + ": expected " +
             std::to_string(cols) + " values, got " + std::to_string(f.size()));
      }
      for (long c = 0; c < cols; ++c) M(r, c) = number(f[static_cast<std::size_t>(c)], name);
    }
    return M;
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void write_instance(std::ostream& out, const ProblemInstance& inst) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "family " << family_name(inst.family) << '\n';
  out << "n " << inst.n << '\n';
  out << "m " << inst.m << '\n';
  out << "seed " << inst.seed << '\n';
  out << "growth_order " << inst.growth_order << '\n';
  out << "f_star " << fmt17(inst.f_star) << '\n';
  out << "sine_power " << inst.sine_power << '\n';
  out << "x_star_is_reference " << (inst.x_star_is_reference ? 1 : 0) << '\n';
  if (inst.x_star) write_block(out, "x_star", inst.x_star->transpose());
  if (inst.g.size() > 0) write_block(out, "g", inst.g);
  for (std::size_t i = 0; i < inst.H.size(); ++i) write_block(out, "H" + std::to_string(i), inst.H[i]);
  if (inst.c.size() > 0) write_block(out, "c", inst.c.transpose());
  for (std::size_t i = 0; i < inst.A.size(); ++i) write_block(out, "A" + std::to_string(i), inst.A[i]);
  out << "end\n";
}

ProblemInstance read_instance(std::istream& in) {
  Reader rd(in);
  std::vector<std::string> f;
  if (!rd.next(f) || f.size() != 2 || f[0] != kMagic) rd.fail("missing 'trb-instance' header");
  if (rd.integer(f[1], "version") != kVersion) rd.fail("unsupported version " + f[1]);

  ProblemInstance inst;
  bool have_family = false, have_end = false;
  while (rd.next(f)) {
    const std::string& key = f[0];
    if (key == "end") {
      have_end = true;
      break;
    }
    if (key == "block") {
      if (f.size() != 4) rd.fail("block header needs name, rows, cols");
      const std::string& name = f[1];
      Matrix M = rd.block(rd.integer(f[2], "rows"), rd.integer(f[3], "cols"), name);
      if (name == "x_star") {
        inst.x_star = M.transpose();
      } else if (name == "g") {
        inst.g = std::move(M);
      } else if (name == "c") {
        inst.c = M.transpose();
      } else if (name.size() > 1 && (name[0] == 'H' || name[0] == 'A')) {
        const long idx = rd.integer(name.substr(1), "block index");
        auto& list = name[0] == 'H' ? inst.H : inst.A;
        if (idx != static_cast<long>(list.size())) rd.fail("block '" + name + "' out of order");
        list.push_back(std::move(M));
      } else {
        rd.fail("unknown block '" + name + "'");
      }
      continue;
    }
    if (f.size() != 2) rd.fail("key '" + key + "' expects exactly one value");
    const std::string& v = f[1];
    if (key == "family") {
      try {
        inst.family = family_from_name(v);
      } catch (const Error& e) {
        rd.fail(e.what());
      }
      have_family = true;
    } else if (key == "n") {
      inst.n = static_cast<int>(rd.integer(v, key));
    } else if (key == "m") {
      inst.m = static_cast<int>(rd.integer(v, key));
    } else if (key == "seed") {
      inst.seed = rd.unsigned64(v, key);
    } else if (key == "growth_order") {
      inst.growth_order = static_cast<int>(rd.integer(v, key));
    } else if (key == "f_star") {
      inst.f_star = rd.number(v, key);
    } else if (key == "sine_power") {
      inst.sine_power = static_cast<int>(rd.integer(v, key));
    } else if (key == "x_star_is_reference") {
      inst.x_star_is_reference = rd.integer(v, key) != 0;
    } else {
      rd.fail("unknown key '" + key + "'");
    }
  }
  if (!have_family) rd.fail("missing 'family'");
  if (!have_end) rd.fail("missing 'end'");

  // shape checks
  const auto n = inst.n, m = inst.m;
  if (n < 1) throw Error("instance: n must be >= 1");
  if (inst.x_star && inst.x_star->size() != n) throw Error("instance: x_star has wrong length");
  switch (inst.family) {
    case Family::MaxQuartic:
    case Family::SumAbsQuartic:
      if (inst.g.rows() != m || inst.g.cols() != n || static_cast<int>(inst.H.size()) != m ||
          inst.c.size() != m) {
        throw Error("instance: quartic data does not match n/m");
      }
      for (const auto& Hi : inst.H) {
        if (Hi.rows() != n || Hi.cols() != n) throw Error("instance: H block has wrong shape");
      }
      break;
    case Family::MaxEigenvalue:
      if (static_cast<int>(inst.A.size()) != n + 1) throw Error("instance: need A0..An blocks");
      for (const auto& Ai : inst.A) {
        if (Ai.rows() != m || Ai.cols() != m) throw Error("instance: A block has wrong shape");
      }
      break;
    default:
      break;
  }
  return inst;
}

std::string serialize(const ProblemInstance& instance) {
  std::ostringstream out;
  write_instance(out, instance);
  return out.str();
}

ProblemInstance deserialize(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

void save_instance(const std::string& path, const ProblemInstance& instance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_instance(out, instance);
  if (!out) throw Error("write to '" + path + "' failed");
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

}  // namespace trb
