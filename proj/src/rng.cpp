#include "owk/rng.hpp"

#include "owk/errors.hpp"

namespace owk {

unsigned SeededStream::below(unsigned n) {
  if (n == 0 || n > 256) throw ValidationError("below(n) needs 1 <= n <= 256");
  const unsigned limit = 256 - 256 % n;
  for (;;) {
    const unsigned b = next_byte();
    if (b < limit) return b % n;
  }
}

}  // namespace owk
