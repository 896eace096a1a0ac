#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sysid/lti.hpp"

namespace sysid {

// Text model file: one or more labelled blocks
//
//   # block: A 3 3
//   0.5,0.5,0
//   ...
//
// Labels A and H are required, B is optional (absent means no input).
// Other lines starting with '#' are comments; blank lines are ignored.
struct ModelFile {
  MatrixXd A;
  std::optional<MatrixXd> B;
  MatrixXd H;

  static ModelFile from_system(const LtiSystem& sys);
  LtiSystem to_system(double rank_tol = kDefaultRankTol) const;
};

void write_model(std::ostream& os, const ModelFile& model);
ModelFile read_model(std::istream& is, const std::string& source = "<model>");

ModelFile load_model(const std::string& path);
void save_model(const std::string& path, const ModelFile& model);

// A single labelled matrix block, shared with estimate output.
void write_block(std::ostream& os, const std::string& label, const MatrixXd& m);

}  // namespace sysid
