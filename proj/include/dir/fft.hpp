#ifndef DIR_FFT_HPP
#define DIR_FFT_HPP

#include "dir/types.hpp"

namespace dir::fftu {

// Smallest 5-smooth integer >= n (sizes FFTW handles at full speed).
int good_size(int n);

// 2-D complex DFT. Forward is unnormalized; inverse carries the 1/(rows*cols)
// factor so ifft2(fft2(x)) == x up to rounding. Thread-safe.
CMat fft2(const CMat& in);
CMat ifft2(const CMat& in);

} // namespace dir::fftu

#endif
