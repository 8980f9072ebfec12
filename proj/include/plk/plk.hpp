#ifndef PLK_PLK_HPP
#define PLK_PLK_HPP

#include "plk/core.hpp"
#include "plk/problems.hpp"
#include "plk/algorithms.hpp"
#include "plk/monitors.hpp"
#include "plk/rates.hpp"
#include "plk/geometry.hpp"
#include "plk/io.hpp"
#include "plk/suite.hpp"

#endif  // PLK_PLK_HPP
