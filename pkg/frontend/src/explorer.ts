// Explorer state: one API query drives both the result list and the map.
// The marker set is derived from the same response, so the map can never
// drift from what the API returned; ungeocoded records stay list-only.

import { ApiUnreachable, type AtlasApi } from './api.js';
import { clusterMarkers, deriveMarkers, type Cluster, type MarkerDatum } from './markers.js';
import type { FilterQuery, RecordSummary } from './types.js';
import { DEFAULT_VIEWPORT, type Viewport } from './urlState.js';

export interface ExplorerState {
  filters: FilterQuery;
  items: RecordSummary[];
  total: number;
  markers: MarkerDatum[];
  clusters: Cluster[];
  viewport: Viewport;
  selectedRecordId: string | null;
  loading: boolean;
  apiUnreachable: boolean;
  errorMessage: string | null;
}

export class ExplorerController {
  state: ExplorerState = {
    filters: {},
    items: [],
    total: 0,
    markers: [],
    clusters: [],
    viewport: { ...DEFAULT_VIEWPORT },
    selectedRecordId: null,
    loading: false,
    apiUnreachable: false,
    errorMessage: null,
  };

  constructor(
    private api: AtlasApi,
    private onChange: (state: ExplorerState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  async applyFilters(filters: FilterQuery): Promise<void> {
    this.state = { ...this.state, filters: { ...filters }, loading: true };
    this.emit();
    try {
      const page = await this.api.listRecords(filters);
      const markers = deriveMarkers(page.items);
      this.state = {
        ...this.state,
        items: page.items,
        total: page.total,
        markers,
        clusters: clusterMarkers(markers, this.state.viewport.zoom),
        loading: false,
        apiUnreachable: false,
        errorMessage: null,
      };
    } catch (error) {
      this.state = {
        ...this.state,
        loading: false,
        apiUnreachable: error instanceof ApiUnreachable,
        errorMessage: error instanceof Error ? error.message : String(error),
      };
    }
    this.emit();
  }

  refresh(): Promise<void> {
    return this.applyFilters(this.state.filters);
  }

  setViewport(viewport: Viewport): void {
    this.state = {
      ...this.state,
      viewport,
      clusters: clusterMarkers(this.state.markers, viewport.zoom),
    };
    this.emit();
  }

  select(recordId: string | null): void {
    this.state = { ...this.state, selectedRecordId: recordId };
    this.emit();
  }
}
