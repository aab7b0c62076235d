#pragma once

namespace gcdstat::detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace gcdstat::detail
