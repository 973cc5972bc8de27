// Thin client over the registry HTTP API. The curator token lives in memory
// only and is attached solely to /moderation requests.

import {
  FILTER_KEYS,
  type FilterQuery,
  type GovernanceItem,
  type RecordDetail,
  type RecordPage,
  type ReleaseManifest,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public fields: string[] = [],
  ) {
    super(message);
  }
}

export class ApiUnreachable extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function buildQueryParams(
  filters: FilterQuery,
  page?: number,
  pageSize?: number,
): URLSearchParams {
  const params = new URLSearchParams();
  for (const key of FILTER_KEYS) {
    const value = filters[key];
    if (value) params.set(key, value);
  }
  if (page !== undefined) params.set('page', String(page));
  if (pageSize !== undefined) params.set('page_size', String(pageSize));
  return params;
}

export class AtlasApi {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    token?: string,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers['Content-Type'] = 'application/json';
    if (token) headers['Authorization'] = `Bearer ${token}`;
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ApiUnreachable(`API unreachable at ${this.baseUrl}`);
    }
    if (!response.ok) {
      let code = 'http_error';
      let message = `${response.status}`;
      let fields: string[] = [];
      try {
        const payload = await response.json();
        code = payload?.error?.code ?? code;
        message = payload?.error?.message ?? message;
        fields = payload?.error?.fields ?? [];
      } catch {
        // non-JSON error body: keep defaults
      }
      throw new ApiError(response.status, code, message, fields);
    }
    return (await response.json()) as T;
  }

  listRecords(filters: FilterQuery, page = 1, pageSize = 200): Promise<RecordPage> {
    const params = buildQueryParams(filters, page, pageSize);
    return this.request('GET', `/records?${params.toString()}`);
  }

  getRecord(id: string): Promise<RecordDetail> {
    return this.request('GET', `/records/${encodeURIComponent(id)}`);
  }

  listReleases(): Promise<{ items: ReleaseManifest[] }> {
    return this.request('GET', '/releases');
  }

  openDispute(recordId: string, claim: string, links: string[], author: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/records/${encodeURIComponent(recordId)}/disputes`,
      { claim, links, author },
    );
  }

  addAnnotation(recordId: string, body: string, author: string, link: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/records/${encodeURIComponent(recordId)}/annotations`,
      { body, author, link },
    );
  }

  requestRedaction(recordId: string, fields: string[], reason: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/records/${encodeURIComponent(recordId)}/redactions`,
      { fields, reason },
    );
  }

  submitIntake(draft: Record<string, string>, submitter: string) {
    return this.request<GovernanceItem & { validation_errors: string[] }>(
      'POST',
      '/intake',
      { draft, submitter },
    );
  }

  // -- moderation (curator token required) --------------------------------

  moderationQueue(kind: 'intake' | 'disputes' | 'redactions' | 'schema-proposals', token: string) {
    return this.request<{ items: GovernanceItem[] }>('GET', `/moderation/${kind}`, undefined, token);
  }

  decideIntake(id: string, decision: 'accept' | 'reject', reason: string, token: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/moderation/intake/${encodeURIComponent(id)}/decision`,
      { decision, reason },
      token,
    );
  }

  resolveDispute(
    id: string,
    outcome: 'edit' | 'annotation' | 'reject',
    reason: string,
    token: string,
    field = '',
    value = '',
  ) {
    return this.request<GovernanceItem>(
      'POST',
      `/moderation/disputes/${encodeURIComponent(id)}/resolution`,
      { outcome, reason, field, value },
      token,
    );
  }

  decideRedaction(id: string, decision: 'apply' | 'decline', reason: string, token: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/moderation/redactions/${encodeURIComponent(id)}/decision`,
      { decision, reason },
      token,
    );
  }

  decideProposal(id: string, decision: 'accept' | 'reject', reason: string, token: string) {
    return this.request<GovernanceItem>(
      'POST',
      `/moderation/schema-proposals/${encodeURIComponent(id)}/decision`,
      { decision, reason },
      token,
    );
  }
}
