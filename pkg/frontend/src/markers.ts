// Marker derivation and clustering. Markers come 1:1 from geocoded records
// in the current (API-filtered) result set; ungeocoded records never reach
// the map. Country-precision anchors get a distinct glyph so the downgrade
// stays visible, not just stored.

import type { RecordSummary } from './types.js';

export interface MarkerDatum {
  id: string;
  name: string;
  region: string;
  tier: string;
  grade: string;
  precision: 'locality' | 'country';
  lon: number;
  lat: number;
}

export interface Cluster {
  lon: number;
  lat: number;
  items: MarkerDatum[];
}

export const REGION_COLORS: Record<string, string> = {
  Africa: '#e4572e',
  Asia: '#f3a712',
  Europe: '#29335c',
  LatinAmerica: '#669900',
  NorthAmerica: '#5995ed',
  Oceania: '#a267ac',
  MultiRegion: '#767b91',
  Global: '#2e282a',
};

export function regionColor(region: string): string {
  return REGION_COLORS[region] ?? '#767b91';
}

// locality anchors render as dots, country anchors as diamonds
export function precisionGlyph(precision: 'locality' | 'country'): 'dot' | 'diamond' {
  return precision === 'locality' ? 'dot' : 'diamond';
}

export function deriveMarkers(records: RecordSummary[]): MarkerDatum[] {
  const markers: MarkerDatum[] = [];
  for (const record of records) {
    const { latitude, longitude, precision } = record.anchor;
    if (precision === 'none' || latitude === null || longitude === null) continue;
    markers.push({
      id: record.id,
      name: record.canonical_name,
      region: record.region,
      tier: record.participation_tier,
      grade: record.evidence_grade,
      precision,
      lon: longitude,
      lat: latitude,
    });
  }
  return markers;
}

// Grid clustering: cells shrink as zoom grows; above the threshold every
// marker stands alone.
const CLUSTER_ZOOM_THRESHOLD = 4;

export function clusterMarkers(markers: MarkerDatum[], zoom: number): Cluster[] {
  if (zoom >= CLUSTER_ZOOM_THRESHOLD) {
    return markers.map((m) => ({ lon: m.lon, lat: m.lat, items: [m] }));
  }
  const cellSize = 40 / Math.pow(2, zoom);
  const cells = new Map<string, MarkerDatum[]>();
  for (const marker of markers) {
    const key = `${Math.floor(marker.lon / cellSize)}:${Math.floor(marker.lat / cellSize)}`;
    const bucket = cells.get(key);
    if (bucket) bucket.push(marker);
    else cells.set(key, [marker]);
  }
  const clusters: Cluster[] = [];
  for (const items of cells.values()) {
    const lon = items.reduce((sum, m) => sum + m.lon, 0) / items.length;
    const lat = items.reduce((sum, m) => sum + m.lat, 0) / items.length;
    clusters.push({ lon, lat, items });
  }
  clusters.sort((a, b) => (a.items[0]!.id < b.items[0]!.id ? -1 : 1));
  return clusters;
}

export function markerCount(clusters: Cluster[]): number {
  return clusters.reduce((sum, cluster) => sum + cluster.items.length, 0);
}
