#pragma once

#include "attain.hpp"
#include "bounds.hpp"
#include "catalog.hpp"
#include "cellfem.hpp"
#include "compliance_map.hpp"
#include "envelope.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "laminate.hpp"
#include "phases.hpp"
#include "tensor.hpp"
#include "topopt.hpp"
#include "translation_bound.hpp"
