// Shapes mirrored from the registry API's JSON payloads.

export type Precision = 'locality' | 'country' | 'none';

export interface Anchor {
  latitude: number | null;
  longitude: number | null;
  precision: Precision;
}

export interface RecordSummary {
  id: string;
  canonical_name: string;
  dedup_key: string;
  alternate_links: string[];
  provenance_url: string;
  source_url_2: string;
  source_url_3: string;
  official_url: string;
  country: string;
  city: string;
  region: string;
  lead_organization: string;
  organization_type: string;
  partner_organizations: string[];
  activity_status: string;
  start_year: number | null;
  end_year: number | null;
  application_domain: string;
  domain_category: string;
  ai_modality: string;
  participation_tier: string;
  participants: string[];
  participation_methods: string[];
  lifecycle_stages: string[];
  decision_points: string[];
  mechanism: string;
  evidence_notes: string;
  verification_status: string;
  evidence_grade: string;
  review_status: string;
  documentation_insufficient: boolean;
  suppress_locality: boolean;
  anchor: Anchor;
}

export interface ChangeLogEntry {
  sequence: number;
  record_id: string;
  field: string;
  old_value: string;
  new_value: string;
  reason: string;
  contributor: string;
  timestamp: string;
}

export interface Annotation {
  id: string;
  record_id: string;
  author: string;
  body: string;
  created_at: string;
  link: string;
}

export interface RecordDetail extends RecordSummary {
  field_presence: Record<string, boolean>;
  redacted_fields: string[];
  edit_history: ChangeLogEntry[];
  annotations: Annotation[];
}

export interface RecordPage {
  items: RecordSummary[];
  total: number;
  page: number;
  page_size: number;
}

export interface ReleaseManifest {
  version: string;
  schema_version: number;
  created_at: string;
  record_count: number;
  geocoded_count: number;
  artifacts: { name: string; byte_length: number; sha256: string }[];
  changelog_range: { from_sequence: number; to_sequence: number };
  release_notes: string[];
}

export interface GovernanceItem {
  id: string;
  state: string;
  [key: string]: unknown;
}

// Filter vocabulary, kept identical to the API's FilterQuery keys.
export const FILTER_KEYS = [
  'region',
  'country',
  'application_domain',
  'organization_type',
  'participation_tier',
  'lifecycle_stage',
  'verification_status',
  'evidence_grade',
  'review_status',
  'activity_status',
  'q',
] as const;

export type FilterKey = (typeof FILTER_KEYS)[number];
export type FilterQuery = Partial<Record<FilterKey, string>>;

export const REGIONS = [
  'Africa',
  'Asia',
  'Europe',
  'LatinAmerica',
  'NorthAmerica',
  'Oceania',
  'MultiRegion',
  'Global',
] as const;

export const TIERS = [
  'CommunityLed',
  'CoDesign',
  'ParticipatoryGovernance',
  'PublicConsultation',
  'ParticipatoryAudit',
  'CoGovernance',
] as const;

export const LIFECYCLE_STAGES = [
  'ProblemFormulation',
  'Design',
  'DataCollection',
  'ModelDevelopment',
  'ModelTraining',
  'Evaluation',
  'Deployment',
  'Governance',
] as const;

export const VERIFICATION_STATUSES = [
  'live_verified',
  'indirect_verified',
  'mixed_verified',
  'paper_verified',
] as const;

export const EVIDENCE_GRADES = ['A', 'B', 'C'] as const;
export const REVIEW_STATUSES = ['core', 'cautious', 'review_candidate'] as const;
export const ACTIVITY_STATUSES = [
  'active',
  'completed',
  'published_case',
  'pilot',
  'funded',
  'legacy',
] as const;

export const REDACTION_MARKER = '[REDACTED]';
