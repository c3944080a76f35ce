#pragma once

#include <cstddef>
#include <initializer_list>

#include "tdakit/complex.hpp"

namespace tdakit::detail {

// Visits every cell of the triangulated pixel grid together with the
// row-major indices of the pixels whose closed box contains it. Pixel ids
// outside the image are skipped.
template <typename Visit>
void for_each_grid_cell(std::size_t rows, std::size_t cols, Visit&& visit)
{
    const std::size_t stride = cols + 1;
    auto corner = [stride](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * stride + c); };
    std::size_t incident[4];
    std::size_t count = 0;
    auto add = [&](long r, long c) {
        if (r >= 0 && c >= 0 && r < static_cast<long>(rows) && c < static_cast<long>(cols))
            incident[count++] = static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c);
    };

    for (std::size_t r = 0; r <= rows; ++r)
        for (std::size_t c = 0; c <= cols; ++c) {
            count = 0;
            const long R = static_cast<long>(r), C = static_cast<long>(c);
            add(R - 1, C - 1);
            add(R - 1, C);
            add(R, C - 1);
            add(R, C);
            visit(Simplex{corner(r, c)}, incident, count);
        }
    // horizontal sides (r,c)-(r,c+1)
    for (std::size_t r = 0; r <= rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            count = 0;
            add(static_cast<long>(r) - 1, static_cast<long>(c));
            add(static_cast<long>(r), static_cast<long>(c));
            visit(Simplex{corner(r, c), corner(r, c + 1)}, incident, count);
        }
    // vertical sides (r,c)-(r+1,c)
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c <= cols; ++c) {
            count = 0;
            add(static_cast<long>(r), static_cast<long>(c) - 1);
            add(static_cast<long>(r), static_cast<long>(c));
            visit(Simplex{corner(r, c), corner(r + 1, c)}, incident, count);
        }
    // interior of each box: diagonal plus two triangles
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            count = 0;
            add(static_cast<long>(r), static_cast<long>(c));
            visit(Simplex{corner(r, c), corner(r + 1, c + 1)}, incident, count);
            visit(Simplex{corner(r, c), corner(r, c + 1), corner(r + 1, c + 1)}, incident, count);
            visit(Simplex{corner(r, c), corner(r + 1, c), corner(r + 1, c + 1)}, incident, count);
        }
}

}  // namespace tdakit::detail
