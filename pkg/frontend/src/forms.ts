// Shared form validation. Every governance decision and resolution form
// requires a reason; submission is blocked client-side before any request
// is made (the server enforces the same rule).

export interface FieldError {
  field: string;
  message: string;
}

export function requireNonEmpty(value: string, field: string): FieldError | null {
  return value.trim() ? null : { field, message: `${field} is required` };
}

export function validateDisputeForm(claim: string): FieldError[] {
  const errors: FieldError[] = [];
  const claimError = requireNonEmpty(claim, 'claim');
  if (claimError) errors.push(claimError);
  return errors;
}

export function validateAnnotationForm(body: string): FieldError[] {
  const errors: FieldError[] = [];
  const bodyError = requireNonEmpty(body, 'body');
  if (bodyError) errors.push(bodyError);
  return errors;
}

export function validateRedactionForm(fields: string[], reason: string): FieldError[] {
  const errors: FieldError[] = [];
  if (fields.length === 0) errors.push({ field: 'fields', message: 'select at least one field' });
  const reasonError = requireNonEmpty(reason, 'reason');
  if (reasonError) errors.push(reasonError);
  return errors;
}

export function validateDecisionForm(reason: string): FieldError[] {
  const errors: FieldError[] = [];
  const reasonError = requireNonEmpty(reason, 'reason');
  if (reasonError) errors.push(reasonError);
  return errors;
}
