#ifndef WORDQE_WORDQE_HPP
#define WORDQE_WORDQE_HPP

#include "wordqe/core.hpp"
#include "wordqe/ensemble.hpp"
#include "wordqe/io.hpp"
#include "wordqe/loss.hpp"
#include "wordqe/metrics.hpp"
#include "wordqe/optimizer.hpp"
#include "wordqe/subword.hpp"
#include "wordqe/synthesis.hpp"
#include "wordqe/ter.hpp"

namespace wordqe {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace wordqe

#endif  // WORDQE_WORDQE_HPP
