#pragma once
// Umbrella header for the whole library.

#include "gwt/cli.hpp"
#include "gwt/config.hpp"
#include "gwt/contraction.hpp"
#include "gwt/engine.hpp"
#include "gwt/errors.hpp"
#include "gwt/fock.hpp"
#include "gwt/gaussian.hpp"
#include "gwt/operator.hpp"
#include "gwt/oracle.hpp"
#include "gwt/ordering.hpp"
#include "gwt/parser.hpp"
#include "gwt/render.hpp"
#include "gwt/scalar.hpp"
