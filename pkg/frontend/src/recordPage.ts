// Record drill-down: provenance links, reliability badges, edit history,
// annotations, and the three separate contribution forms. All writes go
// through the governance endpoints; the page itself never mutates record
// data client-side.

import { ApiError, ApiUnreachable, type AtlasApi } from './api.js';
import {
  validateAnnotationForm,
  validateDisputeForm,
  validateRedactionForm,
  type FieldError,
} from './forms.js';
import type { RecordDetail } from './types.js';

export type ContributionKind = 'dispute' | 'annotation' | 'redaction';

export interface CreatedItem {
  kind: ContributionKind;
  id: string;
  state: string;
}

export interface RecordPageState {
  record: RecordDetail | null;
  notFound: boolean;
  apiUnreachable: boolean;
  errorMessage: string | null;
  formErrors: Record<ContributionKind, FieldError[]>;
  created: CreatedItem[];
}

export class RecordPageController {
  state: RecordPageState = {
    record: null,
    notFound: false,
    apiUnreachable: false,
    errorMessage: null,
    formErrors: { dispute: [], annotation: [], redaction: [] },
    created: [],
  };

  constructor(
    private api: AtlasApi,
    private onChange: (state: RecordPageState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  async load(recordId: string): Promise<void> {
    try {
      const record = await this.api.getRecord(recordId);
      this.state = { ...this.state, record, notFound: false, apiUnreachable: false, errorMessage: null };
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.state = { ...this.state, record: null, notFound: true };
      } else {
        this.state = {
          ...this.state,
          apiUnreachable: error instanceof ApiUnreachable,
          errorMessage: error instanceof Error ? error.message : String(error),
        };
      }
    }
    this.emit();
  }

  private setFormErrors(kind: ContributionKind, errors: FieldError[]): void {
    this.state = { ...this.state, formErrors: { ...this.state.formErrors, [kind]: errors } };
    this.emit();
  }

  async submitDispute(claim: string, link: string, author: string): Promise<boolean> {
    const errors = validateDisputeForm(claim);
    if (errors.length > 0 || !this.state.record) {
      this.setFormErrors('dispute', errors);
      return false;
    }
    return this.submit('dispute', () =>
      this.api.openDispute(this.state.record!.id, claim, link ? [link] : [], author || 'anonymous'),
    );
  }

  async submitAnnotation(body: string, author: string, link: string): Promise<boolean> {
    const errors = validateAnnotationForm(body);
    if (errors.length > 0 || !this.state.record) {
      this.setFormErrors('annotation', errors);
      return false;
    }
    const accepted = await this.submit('annotation', () =>
      this.api.addAnnotation(this.state.record!.id, body, author || 'anonymous', link),
    );
    if (accepted) await this.load(this.state.record!.id); // annotations render after refresh
    return accepted;
  }

  async submitRedaction(fields: string[], reason: string): Promise<boolean> {
    const errors = validateRedactionForm(fields, reason);
    if (errors.length > 0 || !this.state.record) {
      this.setFormErrors('redaction', errors);
      return false;
    }
    return this.submit('redaction', () =>
      this.api.requestRedaction(this.state.record!.id, fields, reason),
    );
  }

  private async submit(
    kind: ContributionKind,
    call: () => Promise<{ id: string; state?: string }>,
  ): Promise<boolean> {
    try {
      const created = await call();
      this.state = {
        ...this.state,
        created: [...this.state.created, { kind, id: created.id, state: created.state ?? 'pending' }],
        formErrors: { ...this.state.formErrors, [kind]: [] },
      };
      this.emit();
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        const fieldErrors: FieldError[] =
          error.fields.length > 0
            ? error.fields.map((field) => ({ field, message: error.message }))
            : [{ field: 'form', message: error.message }];
        this.setFormErrors(kind, fieldErrors);
      } else {
        this.setFormErrors(kind, [{ field: 'form', message: 'API unreachable' }]);
      }
      return false;
    }
  }
}
