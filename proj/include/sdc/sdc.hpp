#pragma once

#include "archive.hpp"
#include "cell.hpp"
#include "code.hpp"
#include "construct.hpp"
#include "distance.hpp"
#include "errors.hpp"
#include "extend.hpp"
#include "field.hpp"
#include "group.hpp"
#include "matrix.hpp"
#include "provenance.hpp"
#include "rng.hpp"
#include "search.hpp"
#include "table2.hpp"
