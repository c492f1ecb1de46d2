#pragma once

#include "renormlab/analyzer.hpp"
#include "renormlab/backends.hpp"
#include "renormlab/bsgs.hpp"
#include "renormlab/cache.hpp"
#include "renormlab/chain.hpp"
#include "renormlab/config.hpp"
#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"
#include "renormlab/pipeline.hpp"
#include "renormlab/report.hpp"
#include "renormlab/tree.hpp"
