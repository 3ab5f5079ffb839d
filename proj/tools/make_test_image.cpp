#include "guided/imaging.hpp"
#include "guided/io.hpp"
#include "guided/pgm.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// Writes the built-in synthetic test image as a PGM.
int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_test_image <out.pgm> [side]\n";
    return 2;
  }
  const long side = argc > 2 ? std::strtol(argv[2], nullptr, 10) : 64;
  try {
    const guided::ImageGrid img = guided::synthetic_image(side);
    guided::write_file_atomic(argv[1], guided::pgm_bytes(img, guided::PgmFormat::Raw));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
