"""Link-stream analysis of threaded interactions (e.g. mailing-list replies)."""
from .ingest import (CleaningPolicy, CleaningReport, DataError, Message, Thread, clean,
                     parse_messages, resolve_threads, to_stream_and_partition, write_messages)
from .metrics import (DensityValue, delta_density, delta_density_profile, graph_density,
                      inter_community_density, inter_thread_delta_density, inter_thread_substream,
                      intra_community_density, intra_thread_delta_density, parse_duration,
                      per_thread_delta_density)
from .relations import (OverlapGraph, QuotientStream, degree_series, node_overlap_graph,
                        quotient_graph, quotient_stream, temporal_overlap_graph)
from .report import CCDF, ThreadStats, ccdf, correlation_table, intercontact_distribution, thread_stats
from .stream import (IntercontactSeries, LinkStream, StaticGraph, StreamError, StreamPartition,
                     SubStream, build_stream, induced_graph, induced_substream, intercontact,
                     partition_by_labels)

__version__ = "0.1.0"
