#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <vector>

namespace tdakit::detail {

// target <- target + source over Z2; both sorted ascending.
inline void add_column(std::vector<std::size_t>& target, const std::vector<std::size_t>& source,
                       std::vector<std::size_t>& scratch)
{
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

}  // namespace tdakit::detail
