#pragma once

#include "affect/error.hpp"
#include "affect/vector.hpp"
#include "affect/records.hpp"
#include "affect/csv.hpp"
#include "affect/ingest.hpp"
#include "affect/segmentation.hpp"
#include "affect/aggregate.hpp"
#include "affect/transform.hpp"
#include "affect/random.hpp"
#include "affect/kmeans.hpp"
#include "affect/clustering.hpp"
#include "affect/geometry.hpp"
#include "affect/special.hpp"
#include "affect/stats.hpp"
#include "affect/pca.hpp"
#include "affect/svg.hpp"
#include "affect/synthetic.hpp"
