#pragma once

#include "treeshift/classify.hpp"
#include "treeshift/dense.hpp"
#include "treeshift/dot.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/io.hpp"
#include "treeshift/moments.hpp"
#include "treeshift/profiles.hpp"
#include "treeshift/report.hpp"
#include "treeshift/shift.hpp"
#include "treeshift/sparse_vector.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/vertex.hpp"
