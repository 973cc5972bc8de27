import { describe, expect, it } from 'vitest';

import { clusterMarkers, deriveMarkers } from '../src/markers.js';
import type { ModerationState } from '../src/moderation.js';
import type { RecordPageState } from '../src/recordPage.js';
import {
  escapeHtml,
  fieldValue,
  renderMapSvg,
  renderModeration,
  renderRecordPage,
  renderResultList,
} from '../src/render.js';
import type { RecordDetail } from '../src/types.js';
import { DEFAULT_VIEWPORT } from '../src/urlState.js';
import { fixtureRecords } from './fakeApi.js';

function detail(): RecordDetail {
  const base = fixtureRecords()[0]!;
  return {
    ...base,
    city: '[REDACTED]',
    field_presence: { city: true },
    redacted_fields: ['city'],
    edit_history: [
      {
        sequence: 3,
        record_id: base.id,
        field: 'city',
        old_value: '[REDACTED]',
        new_value: '[REDACTED]',
        reason: 'redaction: safety',
        contributor: 'curator',
        timestamp: '2026-05-01T00:00:00Z',
      },
    ],
    annotations: [],
  };
}

describe('rendering', () => {
  it('escapes user-supplied content', () => {
    expect(escapeHtml('<script>alert(1)</script>')).not.toContain('<script>');
    const page: RecordPageState = {
      record: { ...detail(), canonical_name: 'Name <img src=x>' },
      notFound: false,
      apiUnreachable: false,
      errorMessage: null,
      formErrors: { dispute: [], annotation: [], redaction: [] },
      created: [],
    };
    expect(renderRecordPage(page)).not.toContain('<img src=x>');
  });

  it('renders masked values with the redaction marker styling', () => {
    expect(fieldValue('[REDACTED]')).toContain('class="redacted"');
    const page: RecordPageState = {
      record: detail(),
      notFound: false,
      apiUnreachable: false,
      errorMessage: null,
      formErrors: { dispute: [], annotation: [], redaction: [] },
      created: [],
    };
    const html = renderRecordPage(page);
    expect(html).toContain('class="redacted"');
    expect(html).toContain('Redacted fields: city');
  });

  it('map svg uses distinct glyphs for country-precision anchors', () => {
    const markers = deriveMarkers(fixtureRecords());
    const svg = renderMapSvg(clusterMarkers(markers, 6), DEFAULT_VIEWPORT);
    expect(svg).toContain('marker-country');
    expect(svg).toContain('marker-locality');
    expect(svg).toContain('<polygon');
    expect(svg).toContain('<circle');
  });

  it('result list flags records that are not on the map', () => {
    const html = renderResultList(fixtureRecords(), null);
    expect(html).toContain('not on map');
  });

  it('moderation without token renders the login view', () => {
    const state: ModerationState = {
      token: null,
      tab: 'intake',
      queues: { intake: [], disputes: [], redactions: [], proposals: [] },
      unauthorized: false,
      errorMessage: null,
      decisionErrors: {},
    };
    const html = renderModeration(state);
    expect(html).toContain('token-form');
    expect(html).not.toContain('queue-item');
  });

  it('not-found view renders for stale links', () => {
    const page: RecordPageState = {
      record: null,
      notFound: true,
      apiUnreachable: false,
      errorMessage: null,
      formErrors: { dispute: [], annotation: [], redaction: [] },
      created: [],
    };
    expect(renderRecordPage(page)).toContain('Record not found');
  });
});
