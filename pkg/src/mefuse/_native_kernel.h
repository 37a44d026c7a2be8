#ifndef MEFUSE_NATIVE_KERNEL_H
#define MEFUSE_NATIVE_KERNEL_H

/* lum: height*width row-major luminance; tap: 2*radius+1 spatial weights
 * tap[d + radius] = exp(-d^2 / sigma_sp^2); out: preallocated like lum. */
void mefuse_bilateral(const double *lum, const double *tap, double *out,
                      long height, long width, long radius,
                      double inv_sigma_rg2, int num_threads);

#endif
