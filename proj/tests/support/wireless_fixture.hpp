#pragma once

#include <sstream>
#include <string>

#include "pbn/random.hpp"

namespace pbn::testing {

/// Text in the layout of the UCI wireless file: 500 rows per room, seven
/// integer signal strengths and the room number, tab separated. Rooms get
/// distinct mean signal profiles so the classes are learnable.
inline std::string synthetic_wireless_text(std::uint64_t seed) {
  Rng rng(seed);
  const int profile[4][7] = {{-60, -55, -60, -65, -70, -80, -80},
                             {-40, -55, -50, -40, -65, -80, -85},
                             {-50, -55, -50, -50, -60, -80, -85},
                             {-60, -55, -60, -60, -50, -85, -85}};
  std::ostringstream out;
  for (int room = 1; room <= 4; ++room) {
    for (int i = 0; i < 500; ++i) {
      for (int j = 0; j < 7; ++j) {
        out << static_cast<int>(profile[room - 1][j] + 4.0 * rng.normal()) << '\t';
      }
      out << room << '\n';
    }
  }
  return out.str();
}

}  // namespace pbn::testing
