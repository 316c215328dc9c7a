#pragma once

// Umbrella header: everything needed to test a dataset for attribute
// interactions, search for the finest acceptable grouping, and release a
// shuffled copy of the data.

#include "astrid/anonymize.hpp"
#include "astrid/classifiers.hpp"
#include "astrid/csv.hpp"
#include "astrid/dataset.hpp"
#include "astrid/grouping.hpp"
#include "astrid/permutation.hpp"
#include "astrid/render.hpp"
#include "astrid/significance.hpp"
#include "astrid/synthetic.hpp"
