from app.models.abelian import AbelianHom, FiniteAbelianGroup
from app.models.groups import FiniteGroup, GroupHom, validate_group

__all__ = ['FiniteGroup', 'GroupHom', 'validate_group', 'FiniteAbelianGroup', 'AbelianHom']
