// Shareable view state <-> URL hash. Deep links restore the exact filter set,
// selection, viewport, and moderation tab; filter keys mirror the API's
// FilterQuery vocabulary, so an encoded state always replays the same query.

import { FILTER_KEYS, type FilterQuery } from './types.js';

export type ModerationTab = 'intake' | 'disputes' | 'redactions' | 'proposals';

export interface Viewport {
  lon: number;
  lat: number;
  zoom: number;
}

export interface ViewState {
  filters: FilterQuery;
  selectedRecordId: string | null;
  viewport: Viewport;
  moderationTab: ModerationTab | null;
}

export const DEFAULT_VIEWPORT: Viewport = { lon: 0, lat: 20, zoom: 1 };

export function defaultViewState(): ViewState {
  return {
    filters: {},
    selectedRecordId: null,
    viewport: { ...DEFAULT_VIEWPORT },
    moderationTab: null,
  };
}

const MODERATION_TABS: ModerationTab[] = ['intake', 'disputes', 'redactions', 'proposals'];

export function encodeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  for (const key of FILTER_KEYS) {
    const value = state.filters[key];
    if (value) params.set(key, value);
  }
  if (state.selectedRecordId) params.set('record', state.selectedRecordId);
  const { lon, lat, zoom } = state.viewport;
  if (lon !== DEFAULT_VIEWPORT.lon || lat !== DEFAULT_VIEWPORT.lat || zoom !== DEFAULT_VIEWPORT.zoom) {
    params.set('view', `${round5(lon)},${round5(lat)},${round5(zoom)}`);
  }
  if (state.moderationTab) params.set('mod', state.moderationTab);
  const encoded = params.toString();
  return encoded ? `#atlas?${encoded}` : '#atlas';
}

export function decodeViewState(hash: string): ViewState {
  const state = defaultViewState();
  const queryStart = hash.indexOf('?');
  if (!hash.startsWith('#atlas') || queryStart < 0) return state;
  const params = new URLSearchParams(hash.slice(queryStart + 1));
  for (const key of FILTER_KEYS) {
    const value = params.get(key);
    if (value) state.filters[key] = value;
  }
  const record = params.get('record');
  if (record) state.selectedRecordId = record;
  const view = params.get('view');
  if (view) {
    const parts = view.split(',').map(Number);
    if (parts.length === 3 && parts.every((n) => Number.isFinite(n))) {
      const [lon, lat, zoom] = parts as [number, number, number];
      state.viewport = {
        lon: clamp(lon, -180, 180),
        lat: clamp(lat, -90, 90),
        zoom: clamp(zoom, 0.5, 12),
      };
    }
  }
  const tab = params.get('mod');
  if (tab && (MODERATION_TABS as string[]).includes(tab)) {
    state.moderationTab = tab as ModerationTab;
  }
  return state;
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(high, Math.max(low, value));
}

function round5(value: number): number {
  return Math.round(value * 1e5) / 1e5;
}
