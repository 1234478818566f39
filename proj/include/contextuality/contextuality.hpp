#pragma once

// Umbrella header.

#include "contextuality/closed_forms.hpp"
#include "contextuality/core.hpp"
#include "contextuality/facet_enum.hpp"
#include "contextuality/fourier_motzkin.hpp"
#include "contextuality/io.hpp"
#include "contextuality/linear_system.hpp"
#include "contextuality/measures.hpp"
#include "contextuality/oracle.hpp"
#include "contextuality/rational.hpp"
#include "contextuality/simplex.hpp"
#include "contextuality/system.hpp"
