// Pure HTML/SVG string builders. Everything user-supplied passes through
// escapeHtml, and redacted values render with a dedicated style so masking
// stays visible.

import type { ExplorerState } from './explorer.js';
import { precisionGlyph, regionColor, type Cluster } from './markers.js';
import type { ModerationState } from './moderation.js';
import type { RecordPageState } from './recordPage.js';
import {
  ACTIVITY_STATUSES,
  EVIDENCE_GRADES,
  LIFECYCLE_STAGES,
  REDACTION_MARKER,
  REGIONS,
  REVIEW_STATUSES,
  TIERS,
  VERIFICATION_STATUSES,
  type FilterQuery,
  type RecordDetail,
  type RecordSummary,
} from './types.js';
import type { Viewport } from './urlState.js';

export function escapeHtml(value: string): string {
  return value
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;')
    .replaceAll("'", '&#39;');
}

export function fieldValue(value: string): string {
  if (value === REDACTION_MARKER) {
    return `<span class="redacted">${REDACTION_MARKER}</span>`;
  }
  return escapeHtml(value);
}

// -- map -------------------------------------------------------------------

export const MAP_WIDTH = 960;
export const MAP_HEIGHT = 480;

export function project(
  lon: number,
  lat: number,
  viewport: Viewport,
  width = MAP_WIDTH,
  height = MAP_HEIGHT,
): { x: number; y: number } {
  const scale = viewport.zoom * (width / 360);
  return {
    x: width / 2 + (lon - viewport.lon) * scale,
    y: height / 2 - (lat - viewport.lat) * scale,
  };
}

function graticule(viewport: Viewport): string {
  const lines: string[] = [];
  for (let lon = -180; lon <= 180; lon += 30) {
    const a = project(lon, -90, viewport);
    const b = project(lon, 90, viewport);
    lines.push(`<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="graticule"/>`);
  }
  for (let lat = -90; lat <= 90; lat += 30) {
    const a = project(-180, lat, viewport);
    const b = project(180, lat, viewport);
    lines.push(`<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="graticule"/>`);
  }
  return lines.join('');
}

function markerShape(cluster: Cluster, viewport: Viewport): string {
  const { x, y } = project(cluster.lon, cluster.lat, viewport);
  if (cluster.items.length > 1) {
    const ids = cluster.items.map((m) => m.id).join(',');
    return (
      `<g class="cluster" data-ids="${escapeHtml(ids)}">` +
      `<circle cx="${x}" cy="${y}" r="11" class="cluster-bubble"/>` +
      `<text x="${x}" y="${y + 4}" text-anchor="middle" class="cluster-count">${cluster.items.length}</text>` +
      `</g>`
    );
  }
  const marker = cluster.items[0]!;
  const color = regionColor(marker.region);
  const title = `<title>${escapeHtml(marker.name)} (${escapeHtml(marker.region)})</title>`;
  if (precisionGlyph(marker.precision) === 'diamond') {
    const d = 6;
    const points = `${x},${y - d} ${x + d},${y} ${x},${y + d} ${x - d},${y}`;
    return (
      `<polygon points="${points}" fill="${color}" class="marker marker-country"` +
      ` data-record-id="${escapeHtml(marker.id)}">${title}</polygon>`
    );
  }
  return (
    `<circle cx="${x}" cy="${y}" r="5" fill="${color}" class="marker marker-locality"` +
    ` data-record-id="${escapeHtml(marker.id)}">${title}</circle>`
  );
}

export function renderMapSvg(
  clusters: Cluster[],
  viewport: Viewport,
  baseMapUrl = '',
): string {
  const backdrop = baseMapUrl
    ? `<image href="${escapeHtml(baseMapUrl)}" x="0" y="0" width="${MAP_WIDTH}" height="${MAP_HEIGHT}" preserveAspectRatio="none"/>`
    : graticule(viewport);
  const markers = clusters.map((cluster) => markerShape(cluster, viewport)).join('');
  return (
    `<svg viewBox="0 0 ${MAP_WIDTH} ${MAP_HEIGHT}" class="atlas-map" role="img">` +
    `<rect x="0" y="0" width="${MAP_WIDTH}" height="${MAP_HEIGHT}" class="map-sea"/>` +
    backdrop +
    markers +
    `</svg>`
  );
}

// -- explorer ---------------------------------------------------------------

const FILTER_CHOICES: [string, string, readonly string[]][] = [
  ['region', 'Region', REGIONS],
  ['participation_tier', 'Participation tier', TIERS],
  ['lifecycle_stage', 'Lifecycle stage', LIFECYCLE_STAGES],
  ['verification_status', 'Verification', VERIFICATION_STATUSES],
  ['evidence_grade', 'Evidence grade', EVIDENCE_GRADES],
  ['review_status', 'Review status', REVIEW_STATUSES],
  ['activity_status', 'Activity status', ACTIVITY_STATUSES],
];

export function renderFilterSidebar(filters: FilterQuery): string {
  const selects = FILTER_CHOICES.map(([key, label, choices]) => {
    const current = filters[key as keyof FilterQuery] ?? '';
    const options = ['<option value="">(any)</option>']
      .concat(
        choices.map(
          (choice) =>
            `<option value="${choice}"${choice === current ? ' selected' : ''}>${choice}</option>`,
        ),
      )
      .join('');
    return (
      `<label class="filter"><span>${label}</span>` +
      `<select data-filter-key="${key}">${options}</select></label>`
    );
  }).join('');
  const q = escapeHtml(filters.q ?? '');
  const country = escapeHtml(filters.country ?? '');
  return (
    `<form id="filter-form" class="filters">` +
    `<label class="filter"><span>Search</span>` +
    `<input type="search" data-filter-key="q" value="${q}" placeholder="name or organization"/></label>` +
    `<label class="filter"><span>Country</span>` +
    `<input type="text" data-filter-key="country" value="${country}"/></label>` +
    selects +
    `<button type="submit">Apply filters</button>` +
    `</form>`
  );
}

function badge(label: string, kind: string): string {
  return `<span class="badge badge-${kind}">${escapeHtml(label)}</span>`;
}

export function renderResultList(items: RecordSummary[], selectedId: string | null): string {
  if (items.length === 0) return `<p class="empty">No records match the current filters.</p>`;
  const rows = items
    .map((record) => {
      const geocoded = record.anchor.precision !== 'none';
      const selected = record.id === selectedId ? ' selected' : '';
      return (
        `<li class="result${selected}" data-record-id="${escapeHtml(record.id)}">` +
        `<a href="#record/${encodeURIComponent(record.id)}">${fieldValue(record.canonical_name)}</a>` +
        ` ${badge(record.participation_tier, 'tier')}` +
        ` ${badge(record.evidence_grade, 'grade')}` +
        (geocoded ? '' : ` ${badge('not on map', 'nomap')}`) +
        `<div class="result-meta">${fieldValue(record.country)} · ${fieldValue(record.lead_organization)}</div>` +
        `</li>`
      );
    })
    .join('');
  return `<ul class="results">${rows}</ul>`;
}

export function renderExplorer(state: ExplorerState, baseMapUrl = ''): string {
  const banner = state.apiUnreachable
    ? `<div class="banner banner-error">API unreachable — showing nothing. Retry when the service is back.</div>`
    : '';
  return (
    banner +
    `<div class="explorer">` +
    `<aside class="sidebar">${renderFilterSidebar(state.filters)}` +
    `<div class="total">${state.total} record(s)</div>` +
    `${renderResultList(state.items, state.selectedRecordId)}</aside>` +
    `<main class="map-pane">${renderMapSvg(state.clusters, state.viewport, baseMapUrl)}` +
    `<div class="map-controls">` +
    `<button data-zoom="in" aria-label="zoom in">+</button>` +
    `<button data-zoom="out" aria-label="zoom out">−</button>` +
    `</div></main>` +
    `</div>`
  );
}

// -- record page -------------------------------------------------------------

function linkList(record: RecordDetail): string {
  const links: [string, string][] = [
    ['Provenance', record.provenance_url],
    ['Official site', record.official_url],
  ];
  if (record.source_url_2) links.push(['Second source', record.source_url_2]);
  if (record.source_url_3) links.push(['Third source', record.source_url_3]);
  record.alternate_links.forEach((link, index) => links.push([`Alternate ${index + 1}`, link]));
  return links
    .map(([label, url]) => {
      if (url === REDACTION_MARKER) return `<li>${label}: ${fieldValue(url)}</li>`;
      return `<li>${label}: <a rel="noopener" href="${escapeHtml(url)}">${escapeHtml(url)}</a></li>`;
    })
    .join('');
}

function errorsBlock(errors: { field: string; message: string }[]): string {
  if (errors.length === 0) return '';
  const items = errors
    .map((e) => `<li data-error-field="${escapeHtml(e.field)}">${escapeHtml(e.message)}</li>`)
    .join('');
  return `<ul class="form-errors">${items}</ul>`;
}

export function renderRecordPage(state: RecordPageState): string {
  if (state.notFound) {
    return `<div class="not-found"><h2>Record not found</h2>` +
      `<p>The link may be stale; the record id does not exist in the registry.</p>` +
      `<p><a href="#atlas">Back to the atlas</a></p></div>`;
  }
  if (!state.record) {
    return state.apiUnreachable
      ? `<div class="banner banner-error">API unreachable.</div>`
      : `<p class="loading">Loading…</p>`;
  }
  const record = state.record;
  const created = state.created
    .map(
      (item) =>
        `<div class="created-notice" data-kind="${item.kind}">Created ${item.kind} ` +
        `<code>${escapeHtml(item.id)}</code> (${escapeHtml(item.state)})</div>`,
    )
    .join('');
  const history = record.edit_history
    .map(
      (entry) =>
        `<tr><td>${entry.sequence}</td><td>${escapeHtml(entry.field)}</td>` +
        `<td>${fieldValue(entry.old_value)}</td><td>${fieldValue(entry.new_value)}</td>` +
        `<td>${escapeHtml(entry.reason)}</td><td>${escapeHtml(entry.timestamp)}</td></tr>`,
    )
    .join('');
  const annotations = record.annotations
    .map(
      (note) =>
        `<li class="annotation" data-annotation-id="${escapeHtml(note.id)}">` +
        `<strong>${escapeHtml(note.author)}</strong>: ${escapeHtml(note.body)}` +
        (note.link ? ` <a rel="noopener" href="${escapeHtml(note.link)}">link</a>` : '') +
        ` <time>${escapeHtml(note.created_at)}</time></li>`,
    )
    .join('');
  const redactionNotice = record.redacted_fields.length
    ? `<p class="redaction-notice">Redacted fields: ${record.redacted_fields
        .map(escapeHtml)
        .join(', ')}</p>`
    : '';
  return (
    `<article class="record-page">` +
    `<h2>${fieldValue(record.canonical_name)}</h2>` +
    `<p class="badges">${badge(record.verification_status, 'verification')} ` +
    `${badge(`grade ${record.evidence_grade}`, 'grade')} ${badge(record.review_status, 'review')} ` +
    `${badge(record.anchor.precision, 'precision')}` +
    (record.documentation_insufficient ? ` ${badge('documentation-insufficient', 'mvpd')}` : '') +
    `</p>` +
    redactionNotice +
    `<dl class="record-fields">` +
    `<dt>Country</dt><dd>${fieldValue(record.country)}</dd>` +
    `<dt>City</dt><dd>${fieldValue(record.city || '—')}</dd>` +
    `<dt>Region</dt><dd>${escapeHtml(record.region)}</dd>` +
    `<dt>Lead organization</dt><dd>${fieldValue(record.lead_organization)}</dd>` +
    `<dt>Participation tier</dt><dd>${escapeHtml(record.participation_tier)}</dd>` +
    `<dt>Lifecycle stages</dt><dd>${record.lifecycle_stages.map(escapeHtml).join(', ')}</dd>` +
    `<dt>Participants</dt><dd>${record.participants.map(fieldValue).join('; ') || '—'}</dd>` +
    `<dt>Decision points</dt><dd>${record.decision_points.map(fieldValue).join('; ') || '—'}</dd>` +
    `<dt>Mechanism</dt><dd>${fieldValue(record.mechanism || '—')}</dd>` +
    `</dl>` +
    `<section><h3>Sources</h3><ul class="links">${linkList(record)}</ul></section>` +
    created +
    `<section class="forms">` +
    `<form id="dispute-form" class="contribution"><h3>Correction / dispute</h3>` +
    errorsBlock(state.formErrors.dispute) +
    `<label>Claim<textarea name="claim" required></textarea></label>` +
    `<label>Supporting link<input name="link" type="url"/></label>` +
    `<label>Your label<input name="author" placeholder="anonymous"/></label>` +
    `<button type="submit">Submit dispute</button></form>` +
    `<form id="annotation-form" class="contribution"><h3>Annotation</h3>` +
    errorsBlock(state.formErrors.annotation) +
    `<label>Note<textarea name="body" required></textarea></label>` +
    `<label>Link<input name="link" type="url"/></label>` +
    `<label>Your label<input name="author" placeholder="anonymous"/></label>` +
    `<button type="submit">Add annotation</button></form>` +
    `<form id="redaction-form" class="contribution"><h3>Redaction request</h3>` +
    errorsBlock(state.formErrors.redaction) +
    `<label>Fields (comma-separated)<input name="fields" placeholder="city, evidence_notes"/></label>` +
    `<label>Reason<textarea name="reason" required></textarea></label>` +
    `<button type="submit">Request redaction</button></form>` +
    `</section>` +
    `<section><h3>Edit history</h3>` +
    `<table class="history"><thead><tr><th>#</th><th>Field</th><th>Old</th><th>New</th>` +
    `<th>Reason</th><th>When</th></tr></thead><tbody>${history}</tbody></table></section>` +
    `<section><h3>Annotations</h3><ul class="annotations">${annotations || '<li class="empty">none yet</li>'}</ul></section>` +
    `</article>`
  );
}

// -- moderation ---------------------------------------------------------------

export function renderModeration(state: ModerationState): string {
  if (!state.token || state.unauthorized) {
    const hint = state.unauthorized && state.token ? `<p class="form-errors">Token rejected.</p>` : '';
    return (
      `<div class="moderation-login">` +
      `<h2>Moderation</h2>${hint}` +
      `<form id="token-form"><label>Curator token<input name="token" type="password"/></label>` +
      `<button type="submit">Unlock</button></form></div>`
    );
  }
  const tabs = (['intake', 'disputes', 'redactions', 'proposals'] as const)
    .map(
      (tab) =>
        `<button class="tab${tab === state.tab ? ' active' : ''}" data-tab="${tab}">${tab}</button>`,
    )
    .join('');
  const items = state.queues[state.tab]
    .map((item) => {
      const errors = state.decisionErrors[item.id] ?? [];
      const payload = escapeHtml(JSON.stringify(item, null, 2));
      return (
        `<li class="queue-item" data-item-id="${escapeHtml(item.id)}">` +
        `<details><summary><code>${escapeHtml(item.id)}</code> — ${escapeHtml(item.state)}</summary>` +
        `<pre>${payload}</pre></details>` +
        errorsBlock(errors) +
        `<form class="decision-form" data-item-id="${escapeHtml(item.id)}">` +
        `<input name="reason" placeholder="reason (required)"/>` +
        decisionButtons(state.tab) +
        `</form></li>`
      );
    })
    .join('');
  return (
    `<div class="moderation"><h2>Moderation</h2><nav class="tabs">${tabs}</nav>` +
    `<ul class="queue">${items || '<li class="empty">queue is empty</li>'}</ul></div>`
  );
}

function decisionButtons(tab: string): string {
  if (tab === 'disputes') {
    return (
      `<button type="submit" data-decision="annotation">Resolve as annotation</button>` +
      `<button type="submit" data-decision="reject">Reject</button>`
    );
  }
  if (tab === 'redactions') {
    return (
      `<button type="submit" data-decision="apply">Apply</button>` +
      `<button type="submit" data-decision="decline">Decline</button>`
    );
  }
  return (
    `<button type="submit" data-decision="accept">Accept</button>` +
    `<button type="submit" data-decision="reject">Reject</button>`
  );
}
