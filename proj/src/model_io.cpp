#include "sysid/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "sysid/errors.hpp"
#include "sysid/text.hpp"

namespace sysid {

ModelFile ModelFile::from_system(const LtiSystem& sys) {
  ModelFile m;
  m.A = sys.A();
  if (sys.p() > 0) m.B = sys.B();
  m.H = sys.H();
  return m;
}

LtiSystem ModelFile::to_system(double rank_tol) const {
  const MatrixXd b = B ? *B : MatrixXd::Zero(A.rows(), 0);
  return make_system(A, b, H, rank_tol);
}

void write_block(std::ostream& os, const std::string& label, const MatrixXd& m) {
  os << "# block: " << label << ' ' << m.rows() << ' ' << m.cols() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << "\n";
  }
}

void write_model(std::ostream& os, const ModelFile& model) {
  write_block(os, "A", model.A);
  if (model.B) write_block(os, "B", *model.B);
  write_block(os, "H", model.H);
}

namespace {

constexpr std::string_view kBlockTag = "# block:";

struct PendingBlock {
  std::string label;
  MatrixXd m;
  int rows_read = 0;
  int header_line = 0;
};

}  // namespace

ModelFile read_model(std::istream& is, const std::string& source) {
  std::map<std::string, MatrixXd> blocks;
  std::optional<PendingBlock> cur;
  auto close = [&](int line) {
    if (!cur) return;
    if (cur->rows_read != cur->m.rows()) {
      throw ParseError(source, line, 1,
                       "block " + cur->label + " declares " + std::to_string(cur->m.rows()) +
                           " rows but has " + std::to_string(cur->rows_read));
    }
    blocks[cur->label] = std::move(cur->m);
    cur.reset();
  };

  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.substr(0, kBlockTag.size()) == kBlockTag) {
      close(lineno);
      auto fields = split(trim(line.substr(kBlockTag.size())), ' ');
      std::erase_if(fields, [](const std::string& s) { return s.empty(); });
      const int col = static_cast<int>(raw.find_first_not_of(" \t", raw.find(':') + 1)) + 1;
      if (fields.size() != 3) {
        throw ParseError(source, lineno, col, "expected '# block: LABEL ROWS COLS'");
      }
      long long rows = 0;
      long long cols = 0;
      if (!parse_int(fields[1], rows) || !parse_int(fields[2], cols) || rows < 0 || cols < 0) {
        throw ParseError(source, lineno, col, "bad block dimensions");
      }
      const std::string& label = fields[0];
      if (label != "A" && label != "B" && label != "H") {
        throw ParseError(source, lineno, col, "unknown block label '" + label + "'");
      }
      if (blocks.count(label)) {
        throw ParseError(source, lineno, col, "duplicate block " + label);
      }
      cur = PendingBlock{label, MatrixXd(rows, cols), 0, lineno};
      continue;
    }
    if (line.front() == '#') continue;
    if (!cur) throw ParseError(source, lineno, 1, "data before the first block header");
    if (cur->rows_read == cur->m.rows()) {
      throw ParseError(source, lineno, 1, "too many rows in block " + cur->label);
    }
    const auto fields = split(line, ',');
    if (static_cast<Eigen::Index>(fields.size()) != cur->m.cols()) {
      throw ParseError(source, lineno, 1,
                       "expected " + std::to_string(cur->m.cols()) + " values, got " +
                           std::to_string(fields.size()));
    }
    int column = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v)) {
        throw ParseError(source, lineno, column, "bad number '" + fields[j] + "'");
      }
      cur->m(cur->rows_read, static_cast<Eigen::Index>(j)) = v;
      column += static_cast<int>(fields[j].size()) + 1;
    }
    ++cur->rows_read;
  }
  close(lineno + 1);

  for (const char* need : {"A", "H"}) {
    if (!blocks.count(need)) {
      throw ParseError(source, lineno + 1, 1, std::string("missing block ") + need);
    }
  }
  ModelFile model;
  model.A = blocks["A"];
  model.H = blocks["H"];
  if (blocks.count("B")) model.B = blocks["B"];
  return model;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return read_model(in, path);
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_model(out, model);
}

}  // namespace sysid
