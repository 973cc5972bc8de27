import { describe, expect, it } from 'vitest';

import { buildQueryParams } from '../src/api.js';
import {
  decodeViewState,
  defaultViewState,
  encodeViewState,
  type ViewState,
} from '../src/urlState.js';

describe('view-state URL codec', () => {
  it('round-trips a full state', () => {
    const state: ViewState = {
      filters: { participation_tier: 'CoDesign', region: 'Africa', q: 'health atlas' },
      selectedRecordId: 'nairobi-codesign-0001',
      viewport: { lon: 12.5, lat: -4.25, zoom: 3 },
      moderationTab: 'disputes',
    };
    expect(decodeViewState(encodeViewState(state))).toEqual(state);
  });

  it('round-trips the default state', () => {
    const state = defaultViewState();
    expect(decodeViewState(encodeViewState(state))).toEqual(state);
  });

  it('restored filters replay the identical API query', () => {
    const state = defaultViewState();
    state.filters = { evidence_grade: 'A', lifecycle_stage: 'Governance' };
    const restored = decodeViewState(encodeViewState(state));
    expect(buildQueryParams(restored.filters).toString()).toEqual(
      buildQueryParams(state.filters).toString(),
    );
  });

  it('ignores unknown hash content', () => {
    expect(decodeViewState('#something-else')).toEqual(defaultViewState());
    expect(decodeViewState('')).toEqual(defaultViewState());
  });

  it('clamps out-of-range viewports and drops junk tabs', () => {
    const state = decodeViewState('#atlas?view=500,-200,99&mod=nonsense');
    expect(state.viewport.lon).toBe(180);
    expect(state.viewport.lat).toBe(-90);
    expect(state.viewport.zoom).toBe(12);
    expect(state.moderationTab).toBeNull();
  });

  it('only encodes known filter keys', () => {
    const state = defaultViewState();
    state.filters = { country: 'Kenya' };
    (state.filters as Record<string, string>)['evil'] = 'x';
    const restored = decodeViewState(encodeViewState(state));
    expect(restored.filters).toEqual({ country: 'Kenya' });
  });
});
