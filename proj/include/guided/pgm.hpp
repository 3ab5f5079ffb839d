#pragma once

#include "guided/imaging.hpp"

#include <iosfwd>
#include <string>

namespace guided {

enum class PgmFormat { Plain /* P2 */, Raw /* P5 */ };

/// Reads P2 or P5. Samples map linearly from [0, maxval] to [0, 1]. The
/// image must be square.
ImageGrid read_pgm(std::istream& in);
ImageGrid read_pgm_file(const std::string& path);

/// Writes with maxval 255. Values are clipped to [0,1] and rounded.
void write_pgm(std::ostream& out, const ImageGrid& img, PgmFormat format = PgmFormat::Raw);
std::string pgm_bytes(const ImageGrid& img, PgmFormat format = PgmFormat::Raw);

}  // namespace guided
