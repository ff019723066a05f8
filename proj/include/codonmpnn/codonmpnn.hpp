#pragma once

// Umbrella header.

#include "codonmpnn/autodiff.hpp"
#include "codonmpnn/checkpoint.hpp"
#include "codonmpnn/corpus.hpp"
#include "codonmpnn/errors.hpp"
#include "codonmpnn/evaluate.hpp"
#include "codonmpnn/featurize.hpp"
#include "codonmpnn/genetic_code.hpp"
#include "codonmpnn/model.hpp"
#include "codonmpnn/optim.hpp"
#include "codonmpnn/taxonomy.hpp"
#include "codonmpnn/tensor.hpp"
#include "codonmpnn/train.hpp"
#include "codonmpnn/util.hpp"
