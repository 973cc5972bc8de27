// Curator dashboard: four queues with accept/reject + mandatory reason.
// Decisions without a reason never leave the client; the server enforces the
// same rule independently. The token is held in memory only.

import { ApiError, type AtlasApi } from './api.js';
import { validateDecisionForm, type FieldError } from './forms.js';
import type { GovernanceItem } from './types.js';
import type { ModerationTab } from './urlState.js';

const QUEUE_PATHS: Record<ModerationTab, 'intake' | 'disputes' | 'redactions' | 'schema-proposals'> = {
  intake: 'intake',
  disputes: 'disputes',
  redactions: 'redactions',
  proposals: 'schema-proposals',
};

export interface ModerationState {
  token: string | null;
  tab: ModerationTab;
  queues: Record<ModerationTab, GovernanceItem[]>;
  unauthorized: boolean;
  errorMessage: string | null;
  decisionErrors: Record<string, FieldError[]>; // keyed by item id
}

export class ModerationController {
  state: ModerationState = {
    token: null,
    tab: 'intake',
    queues: { intake: [], disputes: [], redactions: [], proposals: [] },
    unauthorized: false,
    errorMessage: null,
    decisionErrors: {},
  };

  constructor(
    private api: AtlasApi,
    private onChange: (state: ModerationState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  setToken(token: string): void {
    this.state = { ...this.state, token: token.trim() || null, unauthorized: false };
    this.emit();
  }

  async openTab(tab: ModerationTab): Promise<void> {
    this.state = { ...this.state, tab };
    this.emit();
    await this.reload();
  }

  async reload(): Promise<void> {
    const token = this.state.token;
    if (!token) {
      this.state = { ...this.state, unauthorized: true };
      this.emit();
      return;
    }
    try {
      const queue = await this.api.moderationQueue(QUEUE_PATHS[this.state.tab], token);
      this.state = {
        ...this.state,
        queues: { ...this.state.queues, [this.state.tab]: queue.items },
        unauthorized: false,
        errorMessage: null,
      };
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.state = { ...this.state, unauthorized: true };
      } else {
        this.state = {
          ...this.state,
          errorMessage: error instanceof Error ? error.message : String(error),
        };
      }
    }
    this.emit();
  }

  /** Shared decision path: client-side reason check, then the API call. */
  private async decide(
    itemId: string,
    call: (token: string) => Promise<unknown>,
    reason: string,
  ): Promise<boolean> {
    const errors = validateDecisionForm(reason);
    if (errors.length > 0) {
      this.state = {
        ...this.state,
        decisionErrors: { ...this.state.decisionErrors, [itemId]: errors },
      };
      this.emit();
      return false;
    }
    const token = this.state.token;
    if (!token) {
      this.state = { ...this.state, unauthorized: true };
      this.emit();
      return false;
    }
    try {
      await call(token);
      const { [itemId]: _cleared, ...rest } = this.state.decisionErrors;
      this.state = { ...this.state, decisionErrors: rest };
      await this.reload();
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.state = { ...this.state, unauthorized: true };
      } else if (error instanceof ApiError) {
        this.state = {
          ...this.state,
          decisionErrors: {
            ...this.state.decisionErrors,
            [itemId]: [{ field: 'form', message: error.message }],
          },
        };
      } else {
        this.state = { ...this.state, errorMessage: 'API unreachable' };
      }
      this.emit();
      return false;
    }
  }

  decideIntake(id: string, decision: 'accept' | 'reject', reason: string): Promise<boolean> {
    return this.decide(id, (token) => this.api.decideIntake(id, decision, reason, token), reason);
  }

  resolveDispute(
    id: string,
    outcome: 'edit' | 'annotation' | 'reject',
    reason: string,
    field = '',
    value = '',
  ): Promise<boolean> {
    return this.decide(
      id,
      (token) => this.api.resolveDispute(id, outcome, reason, token, field, value),
      reason,
    );
  }

  decideRedaction(id: string, decision: 'apply' | 'decline', reason: string): Promise<boolean> {
    return this.decide(id, (token) => this.api.decideRedaction(id, decision, reason, token), reason);
  }

  decideProposal(id: string, decision: 'accept' | 'reject', reason: string): Promise<boolean> {
    return this.decide(id, (token) => this.api.decideProposal(id, decision, reason, token), reason);
  }
}
