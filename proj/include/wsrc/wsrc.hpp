#pragma once

#include "wsrc/clustering.hpp"
#include "wsrc/consensus.hpp"
#include "wsrc/corpus.hpp"
#include "wsrc/cuckoo.hpp"
#include "wsrc/error.hpp"
#include "wsrc/eval.hpp"
#include "wsrc/kmeans.hpp"
#include "wsrc/pipeline.hpp"
#include "wsrc/report.hpp"
#include "wsrc/synthetic.hpp"
#include "wsrc/text.hpp"
#include "wsrc/vectorize.hpp"
