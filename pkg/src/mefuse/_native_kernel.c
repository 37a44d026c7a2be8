/* Brute-force bilateral filter over a truncated square window.
 *
 * Weight of neighbour q for centre p:
 *     w(q) = exp(-((qx-px)^2 + (qy-py)^2) / sigma_sp^2)
 *          * exp(-(L(q)-L(p))^2 / sigma_rg^2)
 * The output is sum(w*L)/sum(w); windows are clipped at the image border,
 * which the normalisation absorbs.  The spatial term separates into the
 * caller-supplied 1-D table tap[d + radius] = exp(-d^2 / sigma_sp^2).
 *
 * The range exponent is clamped at RANGE_EXP_CUTOFF: beyond it a tap weighs
 * under 1e-13 while the centre tap always weighs 1, so the clamp perturbs
 * the result by < 1e-9 and keeps exp() out of its slow underflow path.
 */

#include <math.h>

#include "_native_kernel.h"

#define RANGE_EXP_CUTOFF 30.0

void mefuse_bilateral(const double *lum, const double *tap, double *out,
                      long height, long width, long radius,
                      double inv_sigma_rg2, int num_threads)
{
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) num_threads(num_threads)
#endif
    for (long y = 0; y < height; y++) {
        long y0 = y - radius < 0 ? 0 : y - radius;
        long y1 = y + radius > height - 1 ? height - 1 : y + radius;
        for (long x = 0; x < width; x++) {
            long x0 = x - radius < 0 ? 0 : x - radius;
            long x1 = x + radius > width - 1 ? width - 1 : x + radius;
            double centre = lum[y * width + x];
            long shift = radius - x;
            double num = 0.0, den = 0.0;
            for (long qy = y0; qy <= y1; qy++) {
                const double *row = lum + qy * width;
                double wy = tap[qy - y + radius];
                double snum = 0.0, sden = 0.0;
#ifdef _OPENMP
#pragma omp simd reduction(+ : snum, sden)
#endif
                for (long qx = x0; qx <= x1; qx++) {
                    double d = row[qx] - centre;
                    double u = d * d * inv_sigma_rg2;
                    u = u < RANGE_EXP_CUTOFF ? u : RANGE_EXP_CUTOFF;
                    double wq = tap[qx + shift] * exp(-u);
                    snum += wq * row[qx];
                    sden += wq;
                }
                num += wy * snum;
                den += wy * sden;
            }
            /* den >= 1: the centre tap contributes exactly 1. */
            out[y * width + x] = num / den;
        }
    }
}
