#ifndef TGV_IMAGE_IO_HPP
#define TGV_IMAGE_IO_HPP

#include <string>
#include <vector>

#include "tgv/fields.hpp"
#include "tgv/pipeline.hpp"

namespace tgv {

// Portable graymap I/O. load supports P2/P5 with 8- or 16-bit samples
// (16-bit raster is big-endian); intensities are value/maxval, bit-exact.
// save writes P5 with maxval 255, clamping to [0,1] and quantizing
// round-half-up.
ScalarField load_image(const std::string& path);
void save_image(const ScalarField& u, const std::string& path);

// Fixed schema: image,factor,method,alpha,psnr_db,time_s,iters
void save_csv(const std::vector<BenchmarkRow>& rows, const std::string& path);
// One row per grid point: image,factor,method,param,psnr_db,best
void save_sweep_csv(const std::vector<SweepEntry>& entries, const std::string& method,
                    const std::string& path);
// Two columns: iter,relative_gap
void save_trace(const std::vector<std::pair<long, double>>& trace,
                const std::string& path);

}  // namespace tgv

#endif
