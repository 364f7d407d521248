#ifndef XNET_XNET_HPP
#define XNET_XNET_HPP

#include "errors.hpp"
#include "tolerances.hpp"
#include "metric.hpp"
#include "tree.hpp"
#include "network.hpp"
#include "functional.hpp"
#include "variation.hpp"
#include "simplex.hpp"
#include "steiner.hpp"
#include "filling.hpp"
#include "deformation.hpp"

#endif
