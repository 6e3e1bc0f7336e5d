#pragma once

#include "docaware/contextualizer.hpp"
#include "docaware/corpus.hpp"
#include "docaware/diagnostics.hpp"
#include "docaware/errors.hpp"
#include "docaware/evaluation.hpp"
#include "docaware/file_util.hpp"
#include "docaware/fusion.hpp"
#include "docaware/inverted_index.hpp"
#include "docaware/parallel.hpp"
#include "docaware/ranking.hpp"
#include "docaware/run_io.hpp"
#include "docaware/tokenizer.hpp"
#include "docaware/topic_rank.hpp"
