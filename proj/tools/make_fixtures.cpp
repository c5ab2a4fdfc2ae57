// Regenerates the shipped fixture files in canonical form.
// Usage: framelab-make-fixtures <output-dir>

#include <cmath>
#include <complex>
#include <iostream>
#include <string>

#include "framelab/frame_file.hpp"
#include "framelab/spaces.hpp"

namespace fl = framelab;
using Complex = std::complex<double>;

namespace {

fl::Mat<Complex> mercedes() {
  fl::Mat<Complex> rows(3, 2);
  const double s = std::sqrt(3.0) / 2.0;
  rows << 1.0, 0.0, -0.5, s, -0.5, -s;
  return rows;
}

fl::FrameFileData base(fl::Index n, fl::Index m, const std::string& name, const std::string& description) {
  fl::FrameFileData data;
  data.scalar = fl::ScalarKind::real;
  data.m = m;
  data.n = n;
  data.p = 2.0;
  data.r = 2.0;
  data.meta_name = name;
  data.meta_description = description;
  return data;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " <output-dir>\n";
    return 1;
  }
  const std::string dir = argv[1];

  {
    auto data = base(2, 2, "ortho2", "orthonormal basis of R^2; a tight dual pair with all constants 1");
    data.x = fl::Mat<Complex>::Identity(2, 2);
    data.y = fl::Mat<Complex>::Identity(2, 2);
    fl::save_frame_file(dir + "/ortho2.json", data);
  }
  {
    auto data = base(3, 2, "mercedes", "three unit vectors at 120 degrees; tight family with bound sqrt(3/2)");
    data.x = mercedes();
    data.y = mercedes();
    fl::save_frame_file(dir + "/mercedes.json", data);
  }
  {
    auto data = base(3, 2, "mercedes-canonical", "Mercedes family with its canonical dual y_n = (2/3) x_n");
    data.x = mercedes();
    data.y = fl::Mat<Complex>((2.0 / 3.0) * mercedes());
    fl::save_frame_file(dir + "/mercedes-canonical.json", data);
  }
  {
    auto data = base(3, 2, "mercedes-unscaled", "Mercedes family paired with itself; reconstruction defect 1/2");
    data.x = mercedes();
    data.y = mercedes();
    fl::save_frame_file(dir + "/mercedes-unscaled.json", data);
  }
  {
    auto data = base(1, 2, "rank1", "a single vector in the plane; the lower frame bound vanishes");
    data.x = fl::Mat<Complex>(1, 2);
    data.x << 1.0, 0.0;
    data.y = data.x;
    fl::save_frame_file(dir + "/rank1.json", data);
  }
  {
    auto data = base(4, 2, "duplicated-frame", "orthonormal basis listed twice; bounds scale by sqrt(2)");
    fl::Mat<Complex> rows(4, 2);
    rows << 1, 0, 0, 1, 1, 0, 0, 1;
    data.x = rows;
    data.y = rows;
    fl::save_frame_file(dir + "/duplicated-frame.json", data);
  }

  std::cout << "wrote 6 fixtures to " << dir << "\n";
  return 0;
}
